use num_traits::{One, Zero};
use proptest::prelude::*;
use roadgame::normal_form::{
    dominates, enumerate_mixed_nash, enumerate_pure_nash, iesds, iesds_with_order, is_nash, parse_game,
    strict_domination_certificate, write_game, MixedProfile, MixedStrategy, NormalFormGame, Player,
};
use roadgame::rational::{frac, int};
use roadgame::Rational;

fn game_strategy(max_rows: usize, max_cols: usize, range: i64) -> impl Strategy<Value = NormalFormGame> {
    sized_game(1..=max_rows, 1..=max_cols, range)
}

fn sized_game(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
    range: i64,
) -> impl Strategy<Value = NormalFormGame> {
    (rows, cols).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec((-range..=range, -range..=range), n), m).prop_map(move |cells| {
            let rows: Vec<String> = (0..m).map(|i| format!("r{i}")).collect();
            let cols: Vec<String> = (0..n).map(|j| format!("c{j}")).collect();
            let payoffs = cells
                .into_iter()
                .map(|row| row.into_iter().map(|(a, b)| (int(a), int(b))).collect())
                .collect();
            NormalFormGame::new(rows, cols, payoffs).unwrap()
        })
    })
}

fn strategy_for(len: usize) -> impl Strategy<Value = MixedStrategy> {
    prop::collection::vec(0i64..5, len).prop_map(move |w| {
        let total: i64 = w.iter().sum();
        if total == 0 {
            MixedStrategy::uniform(len)
        } else {
            MixedStrategy::new(w.iter().map(|&x| frac(x, total)).collect()).unwrap()
        }
    })
}

fn names(labels: &[String]) -> Vec<String> {
    labels.to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iesds_keeps_every_equilibrium_action(game in game_strategy(3, 3, 6)) {
        let trace = iesds(&game);
        trace.replay(&game).unwrap();
        for eq in enumerate_mixed_nash(&game).unwrap() {
            for i in eq.row.support() {
                prop_assert!(trace.surviving_rows.contains(&i));
            }
            for j in eq.col.support() {
                prop_assert!(trace.surviving_cols.contains(&j));
            }
        }
    }

    #[test]
    fn iesds_survivors_do_not_depend_on_order(game in game_strategy(4, 4, 6), seed in any::<u64>()) {
        let first = iesds(&game);
        let last = iesds_with_order(&game, |c| c.len() - 1);
        let mut state = seed;
        let random = iesds_with_order(&game, |c| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % c.len()
        });
        for t in [&last, &random] {
            t.replay(&game).unwrap();
            prop_assert_eq!(&t.surviving_rows, &first.surviving_rows);
            prop_assert_eq!(&t.surviving_cols, &first.surviving_cols);
            prop_assert_eq!(&t.reduced, &first.reduced);
        }
    }

    #[test]
    fn certificates_strictly_dominate(game in game_strategy(4, 3, 8)) {
        for player in [Player::Row, Player::Col] {
            for action in 0..game.num_actions(player) {
                if let Some(cert) = strict_domination_certificate(&game, player, action).unwrap() {
                    prop_assert!(cert.probs()[action].is_zero());
                    // direct inequality check against every opponent action
                    for other in 0..game.num_actions(player.opponent()) {
                        let mixed = cert.probs().iter().enumerate()
                            .fold(Rational::zero(), |acc, (k, w)| acc + w * game.own_payoff(player, k, other));
                        prop_assert!(mixed > *game.own_payoff(player, action, other));
                    }
                } else {
                    // no pure action dominates either
                    for k in 0..game.num_actions(player) {
                        prop_assert!(!dominates(&game, player, action, &MixedStrategy::pure(game.num_actions(player), k)));
                    }
                }
            }
        }
    }

    #[test]
    fn positive_affine_maps_preserve_equilibria(
        game in game_strategy(3, 3, 6),
        scale in 1i64..7,
        den in 1i64..4,
        shift in -20i64..20,
        player_is_row in any::<bool>(),
    ) {
        let player = if player_is_row { Player::Row } else { Player::Col };
        let a = frac(scale, den);
        let b = int(shift);
        let mapped = game.map_payoffs(player, |x| &a * x + &b);
        prop_assert_eq!(enumerate_mixed_nash(&game).unwrap(), enumerate_mixed_nash(&mapped).unwrap());
        prop_assert_eq!(enumerate_pure_nash(&game), enumerate_pure_nash(&mapped));
        prop_assert_eq!(iesds(&game).surviving_rows, iesds(&mapped).surviving_rows);
    }

    #[test]
    fn equilibria_are_equilibria_and_include_pure_ones(game in game_strategy(3, 4, 5)) {
        let mixed = enumerate_mixed_nash(&game).unwrap();
        prop_assert!(!mixed.is_empty());
        for p in &mixed {
            prop_assert!(is_nash(&game, p));
            let sum = p.row.probs().iter().fold(Rational::zero(), |a, x| a + x);
            prop_assert_eq!(sum, Rational::one());
        }
        for pure in enumerate_pure_nash(&game) {
            let profile = MixedProfile::pure(&game, pure.row, pure.col);
            prop_assert!(mixed.contains(&profile));
        }
    }

    #[test]
    fn expected_payoff_is_bilinear(game in sized_game(3..=3, 3..=3, 9), x in strategy_for(3), y in strategy_for(3)) {
        let profile = MixedProfile::new(x.clone(), y.clone());
        for player in [Player::Row, Player::Col] {
            let mut direct = Rational::zero();
            for i in 0..3 {
                for j in 0..3 {
                    direct += &x.probs()[i] * &y.probs()[j] * game.payoff(player, i, j);
                }
            }
            prop_assert_eq!(game.expected_payoff(&profile, player).unwrap(), direct);
        }
        // best responses are exactly the maximizers
        let values = game.action_values(Player::Row, &y).unwrap();
        let best = game.best_responses(&y, Player::Row).unwrap();
        let max = values.iter().max().unwrap();
        prop_assert_eq!(best, (0..3).filter(|&i| values[i] == *max).collect::<Vec<_>>());
    }

    #[test]
    fn text_round_trip(game in game_strategy(4, 4, 1000), den in 1i64..9) {
        let g = game.map_payoffs(Player::Row, |x| x / int(den));
        let parsed = parse_game(&write_game(&g)).unwrap();
        prop_assert_eq!(names(parsed.row_actions()), names(g.row_actions()));
        prop_assert_eq!(parsed, g);
    }
}

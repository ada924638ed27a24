//! Mixed equilibria checked against a brute-force support search that solves each
//! indifference system with Cramer's rule.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roadgame::normal_form::{enumerate_mixed_nash, MixedProfile, MixedStrategy, NormalFormGame};
use roadgame::Rational;

fn det(m: &[Vec<Rational>]) -> Rational {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::zero();
    for (c, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = pivot * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Strategy over `own` (weights for the listed actions) that makes the opponent
/// indifferent over `other`; `payoff(i, j)` is the opponent's payoff when this
/// player plays `i` and the opponent `j`. `None` when the system is singular.
fn indifference(own: &[usize], other: &[usize], payoff: impl Fn(usize, usize) -> Rational) -> Option<Vec<Rational>> {
    let k = own.len();
    // unknowns: weights w_0..w_{k-1}, value v
    let mut a = vec![vec![Rational::zero(); k + 1]; k + 1];
    let mut b = vec![Rational::zero(); k + 1];
    for (r, &j) in other.iter().enumerate() {
        for (c, &i) in own.iter().enumerate() {
            a[r][c] = payoff(i, j);
        }
        a[r][k] = -Rational::one();
    }
    for c in 0..k {
        a[k][c] = Rational::one();
    }
    b[k] = Rational::one();
    let d = det(&a);
    if d.is_zero() {
        return None;
    }
    Some(
        (0..k)
            .map(|c| {
                let mut m = a.clone();
                for r in 0..=k {
                    m[r][c] = b[r].clone();
                }
                det(&m) / &d
            })
            .collect(),
    )
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn spread(len: usize, support: &[usize], weights: &[Rational]) -> Vec<Rational> {
    let mut p = vec![Rational::zero(); len];
    for (&i, w) in support.iter().zip(weights) {
        p[i] = w.clone();
    }
    p
}

fn values(game: &NormalFormGame, row_player: bool, opponent: &[Rational]) -> Vec<Rational> {
    let (own, other) = if row_player {
        (game.rows(), game.cols())
    } else {
        (game.cols(), game.rows())
    };
    (0..own)
        .map(|a| {
            (0..other).fold(Rational::zero(), |acc, b| {
                let (r, c) = if row_player { (a, b) } else { (b, a) };
                let cell = game.cell(r, c);
                acc + &opponent[b] * if row_player { &cell.0 } else { &cell.1 }
            })
        })
        .collect()
}

/// Best-response sets of both players against the profile.
fn best_response_sets(game: &NormalFormGame, row: &[Rational], col: &[Rational]) -> (Vec<usize>, Vec<usize>) {
    let argmax = |v: Vec<Rational>| {
        let m = v.iter().max().unwrap().clone();
        (0..v.len()).filter(|&i| v[i] == m).collect::<Vec<_>>()
    };
    (argmax(values(game, true, col)), argmax(values(game, false, row)))
}

fn support(p: &[Rational]) -> Vec<usize> {
    (0..p.len()).filter(|&i| !p[i].is_zero()).collect()
}

fn oracle_is_nash(game: &NormalFormGame, row: &[Rational], col: &[Rational]) -> bool {
    let (br_row, br_col) = best_response_sets(game, row, col);
    support(row).iter().all(|i| br_row.contains(i)) && support(col).iter().all(|j| br_col.contains(j))
}

/// Equilibria whose supports have equal size and a nonsingular indifference system.
fn brute_force(game: &NormalFormGame) -> (Vec<(Vec<Rational>, Vec<Rational>)>, bool) {
    let (m, n) = (game.rows(), game.cols());
    let mut found = Vec::new();
    let mut all_nonsingular = true;
    for k in 1..=m.min(n) {
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let x = indifference(&rs, &cs, |i, j| game.cell(i, j).1.clone());
                let y = indifference(&cs, &rs, |j, i| game.cell(i, j).0.clone());
                let (Some(x), Some(y)) = (x, y) else {
                    all_nonsingular = false;
                    continue;
                };
                if x.iter().chain(&y).any(|w| !w.is_positive()) {
                    continue;
                }
                let (row, col) = (spread(m, &rs, &x), spread(n, &cs, &y));
                if oracle_is_nash(game, &row, &col) && !found.contains(&(row.clone(), col.clone())) {
                    found.push((row, col));
                }
            }
        }
    }
    (found, all_nonsingular)
}

fn random_game(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> NormalFormGame {
    let names = ["a", "b", "c", "d"];
    let payoffs: Vec<Vec<(i64, i64)>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| (rng.random_range(-range..=range), rng.random_range(-range..=range)))
                .collect()
        })
        .collect();
    let refs: Vec<&[(i64, i64)]> = payoffs.iter().map(|r| r.as_slice()).collect();
    NormalFormGame::from_integers(&names[..rows], &["w", "x", "y", "z"][..cols], &refs).unwrap()
}

fn as_pairs(eqs: &[MixedProfile]) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    eqs.iter()
        .map(|p| (p.row.probs().to_vec(), p.col.probs().to_vec()))
        .collect()
}

#[test]
fn matches_brute_force_on_nondegenerate_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = 0;
    for trial in 0..1500 {
        let (m, n) = if trial % 3 == 0 { (2, 3) } else { (3, 3) };
        let game = random_game(&mut rng, m, n, 1000);
        let lib = as_pairs(&enumerate_mixed_nash(&game).unwrap());
        let (brute, nonsingular) = brute_force(&game);
        let exact_supports = lib.iter().chain(&brute).all(|(r, c)| {
            let (br_r, br_c) = best_response_sets(&game, r, c);
            br_r == support(r) && br_c == support(c)
        });
        if !(nonsingular && exact_supports) {
            continue;
        }
        compared += 1;
        let mut a = lib.clone();
        let mut b = brute.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "trial {trial}");
        // a nondegenerate game has an odd number of equilibria
        assert_eq!(lib.len() % 2, 1, "trial {trial}");
    }
    assert!(compared > 1000, "only {compared} nondegenerate games");
}

#[test]
fn contains_brute_force_equilibria_on_all_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..1500 {
        let game = random_game(&mut rng, 3, 3, 3);
        let lib = enumerate_mixed_nash(&game).unwrap();
        assert!(!lib.is_empty(), "trial {trial}");
        for p in &lib {
            assert!(
                oracle_is_nash(&game, p.row.probs(), p.col.probs()),
                "trial {trial}: {p}"
            );
        }
        let lib = as_pairs(&lib);
        for eq in brute_force(&game).0 {
            assert!(lib.contains(&eq), "trial {trial}: missing {eq:?}");
        }
    }
}

#[test]
fn four_by_four_results_are_equilibria() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let game = random_game(&mut rng, 4, 4, 50);
        let eqs = enumerate_mixed_nash(&game).unwrap();
        assert!(!eqs.is_empty());
        for p in &eqs {
            assert!(oracle_is_nash(&game, p.row.probs(), p.col.probs()));
            MixedStrategy::new(p.row.probs().to_vec()).unwrap();
        }
        for eq in brute_force(&game).0 {
            assert!(as_pairs(&eqs).contains(&eq));
        }
    }
}

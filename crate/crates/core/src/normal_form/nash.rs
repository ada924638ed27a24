//! Pure and mixed Nash equilibria by exhaustive enumeration.

use super::{MixedProfile, MixedStrategy, NormalFormGame, Player};
use crate::error::{Error, Result};
use crate::linalg::{solve, Solution};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

/// Largest action count per player accepted by [`enumerate_mixed_nash`].
pub const MIXED_NASH_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile {
    pub row: usize,
    pub col: usize,
}

/// Every cell where each action is a best response to the other, in row-major order.
pub fn enumerate_pure_nash(game: &NormalFormGame) -> Vec<PureProfile> {
    let mut out = Vec::new();
    for row in 0..game.rows() {
        for col in 0..game.cols() {
            let (r, c) = game.cell(row, col);
            let row_ok = (0..game.rows()).all(|k| game.payoff(Player::Row, k, col) <= r);
            let col_ok = (0..game.cols()).all(|k| game.payoff(Player::Col, row, k) <= c);
            if row_ok && col_ok {
                out.push(PureProfile { row, col });
            }
        }
    }
    out
}

/// Zero-tolerance equilibrium check: every action in each support attains the
/// player's maximum expected payoff against the opponent's strategy.
pub fn is_nash(game: &NormalFormGame, profile: &MixedProfile) -> bool {
    [Player::Row, Player::Col].into_iter().all(|player| {
        let opponent = profile.strategy(player.opponent());
        let Ok(values) = game.action_values(player, opponent) else {
            return false;
        };
        let Some(best) = values.iter().max() else {
            return false;
        };
        let own = profile.strategy(player);
        own.len() == values.len() && own.support().iter().all(|&i| values[i] == *best)
    })
}

/// Extreme Nash equilibria by support enumeration.
///
/// For every pair (support `S` of the mixing player, indifference set `T` of the
/// opponent) the exact system "opponent indifferent on `T`, probabilities sum to one"
/// is solved; each unique, nonnegative solution under which `T` is a best-response
/// set is a vertex of that player's best-response polytope. Every pair of vertices
/// is then checked with [`is_nash`]. In nondegenerate games this is exactly the
/// equilibrium set; singular systems are skipped since their basic solutions show up
/// as unique solutions of neighbouring (support, indifference) pairs.
pub fn enumerate_mixed_nash(game: &NormalFormGame) -> Result<Vec<MixedProfile>> {
    if game.rows() > MIXED_NASH_CAP || game.cols() > MIXED_NASH_CAP {
        return Err(Error::Capacity {
            rows: game.rows(),
            cols: game.cols(),
            cap: MIXED_NASH_CAP,
        });
    }
    let row_vertices = vertices(game, Player::Row);
    let col_vertices = vertices(game, Player::Col);
    let mut out: Vec<MixedProfile> = Vec::new();
    for row in &row_vertices {
        for col in &col_vertices {
            let profile = MixedProfile::new(row.clone(), col.clone());
            if is_nash(game, &profile) && !out.contains(&profile) {
                out.push(profile);
            }
        }
    }
    out.sort_by_key(|p| {
        (
            p.row.support().len() + p.col.support().len(),
            p.row.support(),
            p.col.support(),
        )
    });
    Ok(out)
}

/// Vertices of `player`'s best-response polytope: strategies of `player` that make
/// some opponent action set exactly indifferent and optimal.
fn vertices(game: &NormalFormGame, player: Player) -> Vec<MixedStrategy> {
    let own = game.num_actions(player);
    let other = game.num_actions(player.opponent());
    let opponent = player.opponent();
    let mut out: Vec<MixedStrategy> = Vec::new();
    for support in subsets(own) {
        for indifferent in subsets(other) {
            if indifferent.len() < support.len() {
                continue;
            }
            // unknowns: probabilities on `support`, then the opponent's value
            let n = support.len() + 1;
            let mut a = Vec::with_capacity(indifferent.len() + 1);
            let mut b = Vec::with_capacity(indifferent.len() + 1);
            for &t in &indifferent {
                let mut eq: Vec<Rational> = support
                    .iter()
                    .map(|&s| game.own_payoff(opponent, t, s).clone())
                    .collect();
                eq.push(-Rational::one());
                a.push(eq);
                b.push(Rational::zero());
            }
            let mut norm = vec![Rational::one(); n];
            norm[n - 1] = Rational::zero();
            a.push(norm);
            b.push(Rational::one());

            let Solution::Unique(x) = solve(&a, &b) else {
                continue;
            };
            if x[..n - 1].iter().any(Signed::is_negative) {
                continue;
            }
            let mut probs = vec![Rational::zero(); own];
            for (&s, p) in support.iter().zip(&x) {
                probs[s] = p.clone();
            }
            let Ok(strategy) = MixedStrategy::new(probs) else {
                continue;
            };
            let value = &x[n - 1];
            let values = game
                .action_values(opponent, &strategy)
                .expect("strategy sized for the game");
            if values.iter().any(|v| v > value) {
                continue;
            }
            if !out.contains(&strategy) {
                out.push(strategy);
            }
        }
    }
    out
}

/// Non-empty subsets of `0..n`, smallest first.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort_by_key(Vec::len);
    all
}

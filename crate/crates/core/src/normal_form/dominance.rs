//! Strict dominance by pure or mixed strategies and iterated elimination.

use super::{MixedStrategy, NormalFormGame, Player};
use crate::error::{Error, Result};
use crate::lp::solve_zero_sum;
use crate::rational::Rational;
use num_traits::{Signed, Zero};

/// True when `strategy` (over all of `player`'s actions) earns strictly more than
/// `action` against every opponent pure action.
pub fn dominates(game: &NormalFormGame, player: Player, action: usize, strategy: &MixedStrategy) -> bool {
    if strategy.len() != game.num_actions(player) || action >= game.num_actions(player) {
        return false;
    }
    (0..game.num_actions(player.opponent())).all(|other| {
        let mixed = strategy
            .probs()
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .fold(Rational::zero(), |acc, (k, w)| {
                acc + w * game.own_payoff(player, k, other)
            });
        mixed > *game.own_payoff(player, action, other)
    })
}

/// Finds a mixed strategy over `player`'s other actions that strictly dominates `action`.
///
/// Solves the zero-sum game whose entries are the payoff advantages of each other
/// action over `action`; the action is strictly dominated exactly when that game's
/// value is positive, and the maximin strategy is then a certificate.
pub fn strict_domination_certificate(
    game: &NormalFormGame,
    player: Player,
    action: usize,
) -> Result<Option<MixedStrategy>> {
    let own = game.num_actions(player);
    if action >= own {
        return Err(Error::Shape(format!(
            "{player} action {action} out of range ({own} actions)"
        )));
    }
    let others: Vec<usize> = (0..own).filter(|&k| k != action).collect();
    if others.is_empty() {
        return Ok(None);
    }
    let opponent = game.num_actions(player.opponent());
    let advantage: Vec<Vec<Rational>> = others
        .iter()
        .map(|&k| {
            (0..opponent)
                .map(|j| game.own_payoff(player, k, j) - game.own_payoff(player, action, j))
                .collect()
        })
        .collect();
    let solution = solve_zero_sum(&advantage);
    if !solution.value.is_positive() {
        return Ok(None);
    }
    let mut probs = vec![Rational::zero(); own];
    for (&k, w) in others.iter().zip(solution.row_strategy) {
        probs[k] = w;
    }
    let certificate = MixedStrategy::new(probs)?;
    debug_assert!(dominates(game, player, action, &certificate));
    Ok(Some(certificate))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub player: Player,
    /// Label of the removed action.
    pub action: String,
    /// The player's action labels in the game state the step was applied to.
    pub available: Vec<String>,
    /// Dominating strategy over `available`.
    pub dominator: MixedStrategy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
    pub reduced: NormalFormGame,
    /// Original indices of the surviving row actions.
    pub surviving_rows: Vec<usize>,
    pub surviving_cols: Vec<usize>,
}

impl EliminationTrace {
    /// Re-applies every step to `original`, checking each recorded dominator
    /// against the game state of its step, and that the end state equals `reduced`.
    pub fn replay(&self, original: &NormalFormGame) -> Result<()> {
        let mut rows: Vec<usize> = (0..original.rows()).collect();
        let mut cols: Vec<usize> = (0..original.cols()).collect();
        for (n, step) in self.steps.iter().enumerate() {
            let state = original.restrict(&rows, &cols)?;
            if state.actions(step.player) != step.available.as_slice() {
                return Err(Error::Structure(format!("step {n}: available actions do not match")));
            }
            let action = state
                .action_index(step.player, &step.action)
                .ok_or_else(|| Error::Structure(format!("step {n}: unknown action {}", step.action)))?;
            if !dominates(&state, step.player, action, &step.dominator) {
                return Err(Error::Structure(format!(
                    "step {n}: dominator does not strictly dominate {}",
                    step.action
                )));
            }
            match step.player {
                Player::Row => rows.remove(action),
                Player::Col => cols.remove(action),
            };
        }
        if original.restrict(&rows, &cols)? != self.reduced
            || rows != self.surviving_rows
            || cols != self.surviving_cols
        {
            return Err(Error::Structure("replayed reduction differs from recorded game".into()));
        }
        Ok(())
    }
}

/// Iterated elimination of strictly dominated actions, mixed dominators allowed.
/// Scans row actions before column actions and removes the first dominated one found.
pub fn iesds(game: &NormalFormGame) -> EliminationTrace {
    iesds_with_order(game, |_| 0)
}

/// IESDS where `pick` chooses which of the currently dominated `(player, index)`
/// candidates to remove next. The surviving action set does not depend on `pick`.
pub fn iesds_with_order(game: &NormalFormGame, mut pick: impl FnMut(&[(Player, usize)]) -> usize) -> EliminationTrace {
    let mut rows: Vec<usize> = (0..game.rows()).collect();
    let mut cols: Vec<usize> = (0..game.cols()).collect();
    let mut steps = Vec::new();
    loop {
        let state = game.restrict(&rows, &cols).expect("survivors are non-empty");
        let mut candidates = Vec::new();
        let mut certificates = Vec::new();
        for player in [Player::Row, Player::Col] {
            for action in 0..state.num_actions(player) {
                if let Some(cert) = strict_domination_certificate(&state, player, action).expect("index in range") {
                    candidates.push((player, action));
                    certificates.push(cert);
                }
            }
        }
        if candidates.is_empty() {
            return EliminationTrace {
                steps,
                reduced: state,
                surviving_rows: rows,
                surviving_cols: cols,
            };
        }
        let chosen = pick(&candidates).min(candidates.len() - 1);
        let (player, action) = candidates[chosen];
        steps.push(EliminationStep {
            player,
            action: state.actions(player)[action].clone(),
            available: state.actions(player).to_vec(),
            dominator: certificates.swap_remove(chosen),
        });
        match player {
            Player::Row => rows.remove(action),
            Player::Col => cols.remove(action),
        };
    }
}

//! Two-player finite normal-form games with exact rational payoffs.

mod dominance;
mod nash;
pub(crate) mod text;

pub use dominance::{
    dominates, iesds, iesds_with_order, strict_domination_certificate, EliminationStep, EliminationTrace,
};
pub use nash::{enumerate_mixed_nash, enumerate_pure_nash, is_nash, PureProfile, MIXED_NASH_CAP};
pub use text::{parse_game, write_game};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Row => "row",
            Player::Col => "col",
        })
    }
}

/// Payoff bimatrix over labelled action sets. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormGame {
    row_actions: Vec<String>,
    col_actions: Vec<String>,
    /// `payoffs[i][j] = (row payoff, col payoff)`
    payoffs: Vec<Vec<(Rational, Rational)>>,
}

impl NormalFormGame {
    pub fn new(
        row_actions: Vec<String>,
        col_actions: Vec<String>,
        payoffs: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self> {
        check_labels("row", &row_actions)?;
        check_labels("col", &col_actions)?;
        if payoffs.len() != row_actions.len() {
            return Err(Error::Shape(format!(
                "{} payoff rows for {} row actions",
                payoffs.len(),
                row_actions.len()
            )));
        }
        for (i, row) in payoffs.iter().enumerate() {
            if row.len() != col_actions.len() {
                return Err(Error::Shape(format!(
                    "payoff row {i} has {} cells for {} col actions",
                    row.len(),
                    col_actions.len()
                )));
            }
        }
        Ok(Self {
            row_actions,
            col_actions,
            payoffs,
        })
    }

    /// Convenience constructor from integer payoffs.
    pub fn from_integers(row_actions: &[&str], col_actions: &[&str], payoffs: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(
            row_actions.iter().map(|s| s.to_string()).collect(),
            col_actions.iter().map(|s| s.to_string()).collect(),
            payoffs
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&(a, b)| (crate::rational::int(a), crate::rational::int(b)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.row_actions.len()
    }

    pub fn cols(&self) -> usize {
        self.col_actions.len()
    }

    pub fn num_actions(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows(),
            Player::Col => self.cols(),
        }
    }

    pub fn row_actions(&self) -> &[String] {
        &self.row_actions
    }

    pub fn col_actions(&self) -> &[String] {
        &self.col_actions
    }

    pub fn actions(&self, player: Player) -> &[String] {
        match player {
            Player::Row => &self.row_actions,
            Player::Col => &self.col_actions,
        }
    }

    pub fn action_index(&self, player: Player, label: &str) -> Option<usize> {
        self.actions(player).iter().position(|a| a == label)
    }

    pub fn payoffs(&self) -> &[Vec<(Rational, Rational)>] {
        &self.payoffs
    }

    pub fn cell(&self, row: usize, col: usize) -> &(Rational, Rational) {
        &self.payoffs[row][col]
    }

    /// Payoff to `player` when the row player picks `row` and the column player `col`.
    pub fn payoff(&self, player: Player, row: usize, col: usize) -> &Rational {
        let cell = &self.payoffs[row][col];
        match player {
            Player::Row => &cell.0,
            Player::Col => &cell.1,
        }
    }

    /// Payoff to `player` indexed from that player's point of view:
    /// `own` is the player's action, `other` the opponent's.
    pub fn own_payoff(&self, player: Player, own: usize, other: usize) -> &Rational {
        match player {
            Player::Row => self.payoff(player, own, other),
            Player::Col => self.payoff(player, other, own),
        }
    }

    /// Game restricted to the listed action indices, in the given order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Shape(
                "restriction must keep at least one action per player".into(),
            ));
        }
        if rows.iter().any(|&r| r >= self.rows()) || cols.iter().any(|&c| c >= self.cols()) {
            return Err(Error::Shape("restriction index out of range".into()));
        }
        Self::new(
            rows.iter().map(|&r| self.row_actions[r].clone()).collect(),
            cols.iter().map(|&c| self.col_actions[c].clone()).collect(),
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.payoffs[r][c].clone()).collect())
                .collect(),
        )
    }

    /// Applies `f` to every payoff of `player`, leaving the opponent's untouched.
    pub fn map_payoffs(&self, player: Player, f: impl Fn(&Rational) -> Rational) -> Self {
        let payoffs = self
            .payoffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(a, b)| match player {
                        Player::Row => (f(a), b.clone()),
                        Player::Col => (a.clone(), f(b)),
                    })
                    .collect()
            })
            .collect();
        Self {
            payoffs,
            ..self.clone()
        }
    }

    /// Expected payoff of `player` under a mixed profile, computed exactly.
    pub fn expected_payoff(&self, profile: &MixedProfile, player: Player) -> Result<Rational> {
        self.check_profile(profile)?;
        let mut total = Rational::zero();
        for (i, p) in profile.row.probs().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in profile.col.probs().iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                total += p * q * self.payoff(player, i, j);
            }
        }
        Ok(total)
    }

    /// Expected payoff of each of `player`'s pure actions against the opponent's mixed strategy.
    pub fn action_values(&self, player: Player, opponent: &MixedStrategy) -> Result<Vec<Rational>> {
        let expected = self.num_actions(player.opponent());
        if opponent.len() != expected {
            return Err(Error::Shape(format!(
                "opponent strategy has {} entries, expected {expected}",
                opponent.len()
            )));
        }
        Ok((0..self.num_actions(player))
            .map(|own| {
                opponent
                    .probs()
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(other, q)| q * self.own_payoff(player, own, other))
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    /// All of `player`'s pure actions maximizing expected payoff against `opponent`; ties included.
    pub fn best_responses(&self, opponent: &MixedStrategy, player: Player) -> Result<Vec<usize>> {
        let values = self.action_values(player, opponent)?;
        let best = values.iter().max().expect("at least one action");
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v == best)
            .map(|(i, _)| i)
            .collect())
    }

    fn check_profile(&self, profile: &MixedProfile) -> Result<()> {
        if profile.row.len() != self.rows() || profile.col.len() != self.cols() {
            return Err(Error::Shape(format!(
                "profile is {}x{}, game is {}x{}",
                profile.row.len(),
                profile.col.len(),
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

fn check_labels(player: &str, labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidGame(format!("{player} player has no actions")));
    }
    let mut seen = HashSet::new();
    for label in labels {
        if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == ':' || c == ',') {
            return Err(Error::InvalidGame(format!(
                "{player} action label {label:?} must be non-empty without whitespace, ':' or ','"
            )));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::InvalidGame(format!("duplicate {player} action label {label:?}")));
        }
    }
    Ok(())
}

/// Probability distribution over one player's actions; entries sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy {
    probs: Vec<Rational>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Shape("empty mixed strategy".into()));
        }
        if probs.iter().any(|p| p.is_negative() || *p > Rational::one()) {
            return Err(Error::InvalidGame("probability outside [0, 1]".into()));
        }
        let total = probs.iter().fold(Rational::zero(), |acc, p| acc + p);
        if !total.is_one() {
            return Err(Error::InvalidGame(format!(
                "probabilities sum to {}",
                format_rational(&total)
            )));
        }
        Ok(Self { probs })
    }

    pub fn pure(len: usize, action: usize) -> Self {
        assert!(action < len, "action {action} out of range for {len} actions");
        let mut probs = vec![Rational::zero(); len];
        probs[action] = Rational::one();
        Self { probs }
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        let p = Rational::new(1.into(), (len as i64).into());
        Self { probs: vec![p; len] }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the single action played with probability one, if any.
    pub fn as_pure(&self) -> Option<usize> {
        self.probs.iter().position(|p| p.is_one())
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(format_rational).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedProfile {
    pub row: MixedStrategy,
    pub col: MixedStrategy,
}

impl MixedProfile {
    pub fn new(row: MixedStrategy, col: MixedStrategy) -> Self {
        Self { row, col }
    }

    pub fn pure(game: &NormalFormGame, row: usize, col: usize) -> Self {
        Self {
            row: MixedStrategy::pure(game.rows(), row),
            col: MixedStrategy::pure(game.cols(), col),
        }
    }

    pub fn strategy(&self, player: Player) -> &MixedStrategy {
        match player {
            Player::Row => &self.row,
            Player::Col => &self.col,
        }
    }
}

/// Prints as `row: 207/221, 14/221; col: 7/261, 254/261`.
impl fmt::Display for MixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row: {}; col: {}", self.row, self.col)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{frac, int};

    fn mixed(probs: &[(i64, i64)]) -> MixedStrategy {
        MixedStrategy::new(probs.iter().map(|&(n, d)| frac(n, d)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_labels() {
        assert!(matches!(
            NormalFormGame::from_integers(&["A"], &["B"], &[&[(1, 1), (2, 2)]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            NormalFormGame::from_integers(&["A", "A"], &["B"], &[&[(1, 1)], &[(1, 1)]]),
            Err(Error::InvalidGame(_))
        ));
        assert!(matches!(
            NormalFormGame::from_integers(&[], &["B"], &[]),
            Err(Error::InvalidGame(_))
        ));
    }

    #[test]
    fn mixed_strategy_invariants() {
        assert!(MixedStrategy::new(vec![frac(1, 2), frac(1, 3)]).is_err());
        assert!(MixedStrategy::new(vec![frac(3, 2), frac(-1, 2)]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
        assert_eq!(mixed(&[(0, 1), (1, 1)]).as_pure(), Some(1));
    }

    #[test]
    fn expected_payoff_pure_cell() {
        let g = human_reduced();
        let profile = MixedProfile::pure(&g, 1, 1);
        assert_eq!(g.expected_payoff(&profile, Player::Row).unwrap(), int(20));
    }

    #[test]
    fn expected_payoff_trivial_game() {
        let g = zero(1, 1);
        let profile = MixedProfile::pure(&g, 0, 0);
        assert_eq!(g.expected_payoff(&profile, Player::Row).unwrap(), int(0));
        assert_eq!(g.expected_payoff(&profile, Player::Col).unwrap(), int(0));
    }

    #[test]
    fn expected_payoff_at_mixed_equilibrium() {
        let g = human_reduced();
        let col = mixed(&[(7, 261), (254, 261)]);
        for row in [
            MixedStrategy::pure(2, 0),
            MixedStrategy::pure(2, 1),
            mixed(&[(207, 221), (14, 221)]),
        ] {
            let profile = MixedProfile::new(row, col.clone());
            assert_eq!(g.expected_payoff(&profile, Player::Row).unwrap(), frac(1580, 261));
        }
    }

    #[test]
    fn expected_payoff_shape_error() {
        let g = human();
        let profile = MixedProfile::pure(&human_reduced(), 0, 0);
        assert!(matches!(g.expected_payoff(&profile, Player::Row), Err(Error::Shape(_))));
    }

    #[test]
    fn best_responses_examples() {
        let g = human_reduced();
        let stop = MixedStrategy::pure(2, 1);
        assert_eq!(g.best_responses(&stop, Player::Row).unwrap(), vec![1]);
        let col = mixed(&[(7, 261), (254, 261)]);
        assert_eq!(g.best_responses(&col, Player::Row).unwrap(), vec![0, 1]);
        let row = mixed(&[(207, 221), (14, 221)]);
        assert_eq!(g.best_responses(&row, Player::Col).unwrap(), vec![0, 1]);

        let z = zero(3, 2);
        assert_eq!(
            z.best_responses(&MixedStrategy::uniform(2), Player::Row).unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(
            z.best_responses(&MixedStrategy::pure(3, 2), Player::Col).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn best_responses_shape_error() {
        let g = human();
        assert!(g.best_responses(&MixedStrategy::uniform(3), Player::Row).is_err());
    }

    #[test]
    fn profile_display() {
        let p = MixedProfile::new(mixed(&[(207, 221), (14, 221)]), mixed(&[(7, 261), (254, 261)]));
        assert_eq!(p.to_string(), "row: 207/221, 14/221; col: 7/261, 254/261");
    }
}

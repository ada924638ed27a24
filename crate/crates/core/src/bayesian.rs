//! Two-player games where nature first draws a vehicle type from a prior.
//!
//! Only the setting where both players observe the realized type is solved: the
//! game then splits into independent per-type normal-form games.

use crate::error::{Error, Result};
use crate::normal_form::text::{content_lines, parse_block};
use crate::normal_form::{enumerate_mixed_nash, parse_game, write_game, MixedProfile, NormalFormGame, Player};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesianGame {
    types: Vec<String>,
    prior: Vec<Rational>,
    games: Vec<NormalFormGame>,
    observed_by_row: bool,
    observed_by_col: bool,
}

impl BayesianGame {
    pub fn new(
        types: Vec<String>,
        prior: Vec<Rational>,
        games: Vec<NormalFormGame>,
        observed_by_row: bool,
        observed_by_col: bool,
    ) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::InvalidGame("no types".into()));
        }
        if prior.len() != types.len() || games.len() != types.len() {
            return Err(Error::Shape(format!(
                "{} types, {} prior entries, {} games",
                types.len(),
                prior.len(),
                games.len()
            )));
        }
        for (k, t) in types.iter().enumerate() {
            if t.is_empty() || t.contains(char::is_whitespace) || types[..k].contains(t) {
                return Err(Error::InvalidGame(format!("bad or duplicate type label {t:?}")));
            }
        }
        if prior.iter().any(|p| p.is_negative() || *p > Rational::one()) {
            return Err(Error::InvalidGame("prior entry outside [0, 1]".into()));
        }
        if !prior.iter().fold(Rational::zero(), |a, p| a + p).is_one() {
            return Err(Error::InvalidGame("prior does not sum to 1".into()));
        }
        let (rows, cols) = (games[0].rows(), games[0].cols());
        if games.iter().any(|g| g.rows() != rows || g.cols() != cols) {
            return Err(Error::Shape("per-type games differ in shape".into()));
        }
        Ok(Self {
            types,
            prior,
            games,
            observed_by_row,
            observed_by_col,
        })
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn prior(&self) -> &[Rational] {
        &self.prior
    }

    pub fn games(&self) -> &[NormalFormGame] {
        &self.games
    }

    pub fn game(&self, type_label: &str) -> Option<&NormalFormGame> {
        self.type_index(type_label).map(|k| &self.games[k])
    }

    pub fn type_index(&self, type_label: &str) -> Option<usize> {
        self.types.iter().position(|t| t == type_label)
    }

    pub fn observed_by_row(&self) -> bool {
        self.observed_by_row
    }

    pub fn observed_by_col(&self) -> bool {
        self.observed_by_col
    }

    /// Same game under another prior.
    pub fn with_prior(&self, prior: Vec<Rational>) -> Result<Self> {
        Self::new(
            self.types.clone(),
            prior,
            self.games.clone(),
            self.observed_by_row,
            self.observed_by_col,
        )
    }
}

/// One mixed profile per type, in type order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeContingentProfile {
    pub types: Vec<String>,
    pub per_type: Vec<MixedProfile>,
}

impl TypeContingentProfile {
    pub fn get(&self, type_label: &str) -> Option<&MixedProfile> {
        self.types
            .iter()
            .position(|t| t == type_label)
            .map(|k| &self.per_type[k])
    }
}

/// All type-contingent equilibria: the Cartesian product of each type's equilibrium
/// list, earlier types varying slowest.
pub fn solve_observed(game: &BayesianGame) -> Result<Vec<TypeContingentProfile>> {
    if !(game.observed_by_row && game.observed_by_col) {
        return Err(Error::Unsupported(
            "only games where both players observe the type can be solved".into(),
        ));
    }
    let per_type: Vec<Vec<MixedProfile>> = game.games.par_iter().map(enumerate_mixed_nash).collect::<Result<_>>()?;

    let mut combos: Vec<Vec<MixedProfile>> = vec![Vec::new()];
    for options in &per_type {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    Ok(combos
        .into_iter()
        .map(|per_type| TypeContingentProfile {
            types: game.types.clone(),
            per_type,
        })
        .collect())
}

/// Ex-ante normal form. An observing player's actions are tuples with one action per
/// type; a non-observing player keeps plain actions. Payoffs are prior-weighted.
///
/// Tuple labels concatenate the per-type labels (`CY` = C for the first type, Y for
/// the second); if any label is longer than one character they are joined with `.`.
pub fn induced_normal_form(game: &BayesianGame) -> Result<NormalFormGame> {
    let base = &game.games[0];
    let row_plans = plans(base.rows(), game.types.len(), game.observed_by_row);
    let col_plans = plans(base.cols(), game.types.len(), game.observed_by_col);
    let label = |player: Player, plan: &[usize]| {
        let labels = base.actions(player);
        let sep = if labels.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            "."
        };
        plan.iter().map(|&a| labels[a].as_str()).collect::<Vec<_>>().join(sep)
    };
    let payoffs = row_plans
        .iter()
        .map(|rp| {
            col_plans
                .iter()
                .map(|cp| {
                    let mut cell = (Rational::zero(), Rational::zero());
                    for (t, (g, w)) in game.games.iter().zip(&game.prior).enumerate() {
                        let (a, b) = g.cell(rp[t], cp[t]);
                        cell.0 += w * a;
                        cell.1 += w * b;
                    }
                    cell
                })
                .collect()
        })
        .collect();
    let dedup = |player: Player, plans: &[Vec<usize>], observed: bool| -> Vec<String> {
        if observed {
            plans.iter().map(|p| label(player, p)).collect()
        } else {
            plans.iter().map(|p| base.actions(player)[p[0]].clone()).collect()
        }
    };
    NormalFormGame::new(
        dedup(Player::Row, &row_plans, game.observed_by_row),
        dedup(Player::Col, &col_plans, game.observed_by_col),
        payoffs,
    )
}

/// Action plans: one action per type if observed, otherwise the same action for all types.
fn plans(actions: usize, types: usize, observed: bool) -> Vec<Vec<usize>> {
    if !observed {
        return (0..actions).map(|a| vec![a; types]).collect();
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..types {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..actions).map(move |a| {
                    let mut next = prefix.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
    }
    out
}

/// Probability that play ends in one of each type's collision cells:
/// `Σ_t prior(t) Σ_{(i,j) ∈ cells(t)} row_t[i] col_t[j]`.
pub fn equilibrium_collision_probability(
    profile: &TypeContingentProfile,
    prior: &[Rational],
    collision_cells: &[Vec<(usize, usize)>],
) -> Result<Rational> {
    if prior.len() != profile.per_type.len() || collision_cells.len() != prior.len() {
        return Err(Error::Shape(
            "prior, profile and cell lists must cover the same types".into(),
        ));
    }
    let mut total = Rational::zero();
    for ((weight, p), cells) in prior.iter().zip(&profile.per_type).zip(collision_cells) {
        for &(i, j) in cells {
            let (Some(r), Some(c)) = (p.row.probs().get(i), p.col.probs().get(j)) else {
                return Err(Error::Shape(format!("collision cell ({i}, {j}) out of range")));
            };
            total += weight * r * c;
        }
    }
    Ok(total)
}

/// Parses the Bayesian game text form:
///
/// ```text
/// types: AV HUMAN
/// prior: 1/2 1/2
/// observed: both        # both | row | col | none
/// [AV]
/// rows: Y W C
/// ...
/// [HUMAN]
/// ...
/// ```
pub fn parse_bayesian(text: &str) -> Result<BayesianGame> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let mut types: Option<Vec<String>> = None;
    let mut prior: Option<Vec<Rational>> = None;
    let mut observed = (true, true);
    let mut blocks: Vec<(usize, String, Vec<(usize, &str)>)> = Vec::new();
    let last_line = lines.last().map_or(1, |(n, _)| *n);

    for &(n, line) in &lines {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            blocks.push((n, name.trim().to_string(), Vec::new()));
            continue;
        }
        if let Some((_, _, body)) = blocks.last_mut() {
            body.push((n, line));
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(n, "expected `key: value`"))?;
        match key.trim() {
            "types" => types = Some(rest.split_whitespace().map(str::to_string).collect()),
            "prior" => {
                prior = Some(
                    rest.split_whitespace()
                        .map(|s| parse_rational(s).ok_or_else(|| Error::parse(n, format!("bad prior entry `{s}`"))))
                        .collect::<Result<_>>()?,
                )
            }
            "observed" => {
                observed = match rest.trim() {
                    "both" => (true, true),
                    "row" => (true, false),
                    "col" => (false, true),
                    "none" => (false, false),
                    other => return Err(Error::parse(n, format!("unknown observation mode `{other}`"))),
                }
            }
            other => return Err(Error::parse(n, format!("unknown key `{other}`"))),
        }
    }
    let types = types.ok_or_else(|| Error::parse(last_line, "missing `types:` line"))?;
    let prior = prior.ok_or_else(|| Error::parse(last_line, "missing `prior:` line"))?;
    let mut games: Vec<Option<NormalFormGame>> = vec![None; types.len()];
    for (n, name, body) in blocks {
        let idx = types
            .iter()
            .position(|t| *t == name)
            .ok_or_else(|| Error::parse(n, format!("`[{name}]` is not a declared type")))?;
        if games[idx].replace(parse_block(&body)?).is_some() {
            return Err(Error::parse(n, format!("duplicate block `[{name}]`")));
        }
    }
    let games = games
        .into_iter()
        .zip(&types)
        .map(|(g, t)| g.ok_or_else(|| Error::parse(last_line, format!("missing block `[{t}]`"))))
        .collect::<Result<Vec<_>>>()?;
    BayesianGame::new(types, prior, games, observed.0, observed.1).map_err(|e| Error::parse(last_line, e.to_string()))
}

pub fn write_bayesian(game: &BayesianGame) -> String {
    let observed = match (game.observed_by_row, game.observed_by_col) {
        (true, true) => "both",
        (true, false) => "row",
        (false, true) => "col",
        (false, false) => "none",
    };
    let mut out = format!(
        "types: {}\nprior: {}\nobserved: {observed}\n",
        game.types.join(" "),
        game.prior.iter().map(format_rational).collect::<Vec<_>>().join(" ")
    );
    for (t, g) in game.types.iter().zip(&game.games) {
        out.push_str(&format!("[{t}]\n{}", write_game(g)));
    }
    out
}

/// True when the text looks like a Bayesian game rather than a plain normal-form game.
pub fn is_bayesian_text(text: &str) -> bool {
    content_lines(text).next().is_some_and(|(_, l)| l.starts_with("types:"))
}

/// Contents of a game description file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameFile {
    Normal(NormalFormGame),
    Bayesian(BayesianGame),
}

/// Parses either text form, dispatching on a leading `types:` line.
pub fn parse_game_file(text: &str) -> Result<GameFile> {
    if is_bayesian_text(text) {
        parse_bayesian(text).map(GameFile::Bayesian)
    } else {
        parse_game(text).map(GameFile::Normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::fixtures::{av, human, matching_pennies};
    use crate::normal_form::{enumerate_pure_nash, MixedStrategy};
    use crate::rational::{frac, int};

    fn zebra(p: Rational) -> BayesianGame {
        let q = Rational::one() - &p;
        BayesianGame::new(
            vec!["AV".into(), "HUMAN".into()],
            vec![p, q],
            vec![av(), human()],
            true,
            true,
        )
        .unwrap()
    }

    fn mixed_human_profile() -> MixedProfile {
        MixedProfile::new(
            MixedStrategy::new(vec![frac(207, 221), int(0), frac(14, 221)]).unwrap(),
            MixedStrategy::new(vec![frac(7, 261), frac(254, 261)]).unwrap(),
        )
    }

    fn collision_cells() -> Vec<Vec<(usize, usize)>> {
        vec![vec![(1, 0), (2, 0)], vec![(1, 0), (2, 0)]]
    }

    #[test]
    fn validates_prior_and_shapes() {
        let bad = BayesianGame::new(
            vec!["A".into(), "B".into()],
            vec![frac(1, 2), frac(1, 3)],
            vec![av(), human()],
            true,
            true,
        );
        assert!(matches!(bad, Err(Error::InvalidGame(_))));
        let shape = BayesianGame::new(
            vec!["A".into(), "B".into()],
            vec![frac(1, 2), frac(1, 2)],
            vec![av(), matching_pennies()],
            true,
            true,
        );
        assert!(matches!(shape, Err(Error::Shape(_))));
    }

    #[test]
    fn solve_observed_contains_published_profile() {
        let sols = solve_observed(&zebra(frac(1, 3))).unwrap();
        // one AV equilibrium times three human equilibria
        assert_eq!(sols.len(), 3);
        let target = TypeContingentProfile {
            types: vec!["AV".into(), "HUMAN".into()],
            per_type: vec![MixedProfile::pure(&av(), 2, 1), mixed_human_profile()],
        };
        assert!(sols.contains(&target));
        assert!(sols
            .iter()
            .all(|s| s.get("AV") == Some(&MixedProfile::pure(&av(), 2, 1))));
    }

    #[test]
    fn solve_observed_rejects_hidden_type() {
        let g = zebra(frac(1, 2));
        let hidden = BayesianGame::new(g.types.clone(), g.prior.clone(), g.games.clone(), false, true).unwrap();
        assert!(matches!(solve_observed(&hidden), Err(Error::Unsupported(_))));
    }

    #[test]
    fn identical_types_repeat_equilibrium() {
        let g = BayesianGame::new(
            vec!["A".into(), "B".into()],
            vec![frac(1, 4), frac(3, 4)],
            vec![matching_pennies(), matching_pennies()],
            true,
            true,
        )
        .unwrap();
        let sols = solve_observed(&g).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].per_type[0], sols[0].per_type[1]);
    }

    #[test]
    fn induced_form_shape_and_payoff() {
        let induced = induced_normal_form(&zebra(frac(1, 2))).unwrap();
        assert_eq!((induced.rows(), induced.cols()), (9, 4));
        let r = induced.action_index(Player::Row, "CY").unwrap();
        let c = induced.action_index(Player::Col, "SG").unwrap();
        assert_eq!(induced.payoff(Player::Row, r, c), &int(14));
    }

    #[test]
    fn induced_pure_nash_include_published_pairs() {
        let induced = induced_normal_form(&zebra(frac(1, 2))).unwrap();
        let labels: Vec<(String, String)> = enumerate_pure_nash(&induced)
            .into_iter()
            .map(|p| {
                (
                    induced.row_actions()[p.row].clone(),
                    induced.col_actions()[p.col].clone(),
                )
            })
            .collect();
        assert!(labels.contains(&("CY".into(), "SG".into())));
        assert!(labels.contains(&("CC".into(), "SS".into())));
        assert_eq!(labels.len(), 2);
    }

    #[test]
    fn zero_weight_type_is_payoff_irrelevant() {
        let induced = induced_normal_form(&zebra(int(1))).unwrap();
        let a = induced.action_index(Player::Row, "CY").unwrap();
        let b = induced.action_index(Player::Row, "CW").unwrap();
        for c in 0..induced.cols() {
            assert_eq!(induced.cell(a, c), induced.cell(b, c));
        }
    }

    #[test]
    fn unobserved_player_keeps_plain_actions() {
        let g = zebra(frac(1, 2));
        let hidden = BayesianGame::new(g.types.clone(), g.prior.clone(), g.games.clone(), false, true).unwrap();
        let induced = induced_normal_form(&hidden).unwrap();
        assert_eq!(induced.row_actions(), ["Y", "W", "C"]);
        assert_eq!(induced.cols(), 4);
    }

    #[test]
    fn collision_probability_closed_form() {
        let tc = |p: Rational| {
            let g = zebra(p);
            let profile = TypeContingentProfile {
                types: g.types.clone(),
                per_type: vec![MixedProfile::pure(&av(), 2, 1), mixed_human_profile()],
            };
            equilibrium_collision_probability(&profile, g.prior(), &collision_cells()).unwrap()
        };
        assert_eq!(tc(int(0)), frac(98, 57681));
        assert_eq!(tc(int(1)), int(0));
        assert_eq!(tc(frac(3, 10)), frac(7, 10) * frac(98, 57681));
    }

    #[test]
    fn collision_probability_bad_cell() {
        let g = zebra(int(0));
        let profile = TypeContingentProfile {
            types: g.types.clone(),
            per_type: vec![MixedProfile::pure(&av(), 2, 1), mixed_human_profile()],
        };
        let cells = vec![vec![], vec![(5, 0)]];
        assert!(equilibrium_collision_probability(&profile, g.prior(), &cells).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = zebra(frac(1, 2));
        let text = write_bayesian(&g);
        assert!(text.starts_with("types: AV HUMAN\nprior: 1/2 1/2\nobserved: both\n[AV]\nrows: Y W C\n"));
        let back = parse_bayesian(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_bayesian(&back), text);
        assert!(matches!(parse_game_file(&text), Ok(GameFile::Bayesian(_))));
        assert!(matches!(parse_game_file(&write_game(&av())), Ok(GameFile::Normal(_))));
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            parse_bayesian("types: A\nprior: 1\nobserved: maybe\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_bayesian("types: A\nprior: 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_bayesian("types: A\nprior: 1\n[B]\nrows: x\ncols: y\nx: 1,1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}

//! Canonical crossing games: the zebra-crossing cyclist/vehicle game at three speed
//! classes, the fined-regulation variant, and payoff noise.
//!
//! Medium-speed payoff tables, `(cyclist, driver)`, rows Y/W/C (yield, walk, cycle),
//! columns G/S (go, stop):
//!
//! ```text
//! human  Y: (8, 15)     (6, 1)       AV  Y: (5, 7)       (3, 10)
//!        W: (-400,-400) (15, 7)          W: (-400,-500)  (15, 8)
//!        C: (-500,-200) (20, 7)          C: (-500,-300)  (20, 12)
//! ```
//!
//! The human driver's (Y, G) value 15 is the one that makes the driver indifferent
//! when the cyclist yields with probability 207/221. The AV's 7 / 8 / 12 only need
//! to keep Stop strictly dominant and (C, S) the AV's best cell.
//!
//! Other speeds multiply the four collision entries, (W, G) and (C, G) for both
//! players, by a severity factor: 0.6 at low and 1.6 at high speed by default.

use crate::bayesian::{BayesianGame, TypeContingentProfile};
use crate::error::{Error, Result};
use crate::normal_form::{MixedProfile, NormalFormGame, Player};
use crate::rational::{frac, from_f64_decimal, int, parse_rational, Rational};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

/// Outcome cells `(row, col)` where the vehicle goes while the cyclist walks or cycles.
pub const ZEBRA_COLLISION_CELLS: [(usize, usize); 2] = [(1, 0), (2, 0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SpeedClass {
    Low,
    Medium,
    High,
}

impl SpeedClass {
    pub const ALL: [SpeedClass; 3] = [SpeedClass::Low, SpeedClass::Medium, SpeedClass::High];

    pub fn label(self) -> &'static str {
        match self {
            SpeedClass::Low => "LOW",
            SpeedClass::Medium => "MEDIUM",
            SpeedClass::High => "HIGH",
        }
    }

    /// km/h
    pub fn nominal_speed(self) -> f64 {
        match self {
            SpeedClass::Low => 30.0,
            SpeedClass::Medium => 45.0,
            SpeedClass::High => 70.0,
        }
    }

    /// Share of collisions that are fatal at this speed.
    pub fn fatality_rate(self) -> f64 {
        match self {
            SpeedClass::Low => 0.10,
            SpeedClass::Medium => 0.50,
            SpeedClass::High => 0.99,
        }
    }
}

impl fmt::Display for SpeedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpeedClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LOW" => Ok(SpeedClass::Low),
            "MEDIUM" => Ok(SpeedClass::Medium),
            "HIGH" => Ok(SpeedClass::High),
            _ => Err(Error::config("speed_class", format!("unknown speed class `{s}`"))),
        }
    }
}

/// Collision-entry multipliers for the non-medium speed classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Severity {
    pub low: Rational,
    pub high: Rational,
}

impl Default for Severity {
    fn default() -> Self {
        Self {
            low: frac(3, 5),
            high: frac(8, 5),
        }
    }
}

impl Severity {
    pub fn multiplier(&self, speed: SpeedClass) -> Rational {
        match speed {
            SpeedClass::Low => self.low.clone(),
            SpeedClass::Medium => Rational::one(),
            SpeedClass::High => self.high.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZebraPayoffTable {
    pub speed: SpeedClass,
    pub av_game: NormalFormGame,
    pub human_game: NormalFormGame,
    /// Multipliers applied to the cyclist's and the driver's collision entries.
    pub severity_scale: (Rational, Rational),
}

pub fn zebra_human_medium() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["Y", "W", "C"],
        &["G", "S"],
        &[&[(8, 15), (6, 1)], &[(-400, -400), (15, 7)], &[(-500, -200), (20, 7)]],
    )
    .expect("static table")
}

pub fn zebra_av_medium() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["Y", "W", "C"],
        &["G", "S"],
        &[&[(5, 7), (3, 10)], &[(-400, -500), (15, 8)], &[(-500, -300), (20, 12)]],
    )
    .expect("static table")
}

/// Both per-type tables at `speed`.
pub fn zebra_tables(speed: SpeedClass, severity: &Severity) -> ZebraPayoffTable {
    let m = severity.multiplier(speed);
    let scale = |g: NormalFormGame| scale_collisions(&g, &m, &m);
    ZebraPayoffTable {
        speed,
        av_game: scale(zebra_av_medium()),
        human_game: scale(zebra_human_medium()),
        severity_scale: (m.clone(), m),
    }
}

fn scale_collisions(game: &NormalFormGame, cyclist: &Rational, driver: &Rational) -> NormalFormGame {
    let mut payoffs = game.payoffs().to_vec();
    for (r, c) in ZEBRA_COLLISION_CELLS {
        let (a, b) = &mut payoffs[r][c];
        *a *= cyclist;
        *b *= driver;
    }
    NormalFormGame::new(game.row_actions().to_vec(), game.col_actions().to_vec(), payoffs).expect("same shape")
}

impl ZebraPayoffTable {
    /// Bayesian game with AV probability `p`, both players observing the type.
    pub fn bayesian(&self, p: Rational) -> Result<BayesianGame> {
        let q = Rational::one() - &p;
        BayesianGame::new(
            vec!["AV".into(), "HUMAN".into()],
            vec![p, q],
            vec![self.av_game.clone(), self.human_game.clone()],
            true,
            true,
        )
    }

    /// Collision cells per type, in the order of [`ZebraPayoffTable::bayesian`].
    pub fn collision_cells(&self) -> Vec<Vec<(usize, usize)>> {
        vec![ZEBRA_COLLISION_CELLS.to_vec(), ZEBRA_COLLISION_CELLS.to_vec()]
    }
}

/// Zebra game at `speed` with the default severity multipliers.
pub fn zebra_game(speed: SpeedClass, p: Rational) -> Result<BayesianGame> {
    zebra_tables(speed, &Severity::default()).bayesian(p)
}

/// The equilibrium with the largest combined support, first one on ties. For the
/// zebra tables this picks the AV's pure (C, S) and the human game's fully mixed
/// equilibrium.
pub fn most_mixed(equilibria: &[MixedProfile]) -> Option<&MixedProfile> {
    equilibria.iter().fold(None, |best: Option<&MixedProfile>, p| {
        let size = |p: &MixedProfile| p.row.support().len() + p.col.support().len();
        match best {
            Some(b) if size(b) >= size(p) => Some(b),
            _ => Some(p),
        }
    })
}

/// Type-contingent equilibrium used for collision statistics: the most mixed
/// equilibrium of each type's game.
pub fn zebra_equilibrium(table: &ZebraPayoffTable) -> Result<TypeContingentProfile> {
    let pick = |g: &NormalFormGame| -> Result<MixedProfile> {
        let eqs = crate::normal_form::enumerate_mixed_nash(g)?;
        most_mixed(&eqs)
            .cloned()
            .ok_or_else(|| Error::InvalidGame("game without equilibrium".into()))
    };
    Ok(TypeContingentProfile {
        types: vec!["AV".into(), "HUMAN".into()],
        per_type: vec![pick(&table.av_game)?, pick(&table.human_game)?],
    })
}

/// Regulation variant where crossing without right of way is fined.
pub fn fined_game() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["Yield", "Walk", "Cycle"],
        &["Go", "Stop"],
        &[&[(18, 10), (15, 4)], &[(-500, -400), (0, 5)], &[(-600, -200), (5, 5)]],
    )
    .expect("static table")
}

/// Multiplies every payoff by an independent factor uniform in `[1 - a, 1 + a]`.
/// Factors are positive, so every sign is preserved.
pub fn perturb_payoffs<R: Rng + ?Sized>(
    game: &NormalFormGame,
    relative_amplitude: f64,
    rng: &mut R,
) -> Result<NormalFormGame> {
    if !(0.0..=0.5).contains(&relative_amplitude) {
        return Err(Error::Domain(format!(
            "noise amplitude must lie in [0, 0.5], got {relative_amplitude}"
        )));
    }
    if relative_amplitude == 0.0 {
        return Ok(game.clone());
    }
    let mut factor = || {
        let f: f64 = rng.random_range(1.0 - relative_amplitude..=1.0 + relative_amplitude);
        BigRational::from_float(f).expect("finite factor")
    };
    let payoffs = game
        .payoffs()
        .iter()
        .map(|row| row.iter().map(|(a, b)| (a * factor(), b * factor())).collect())
        .collect();
    NormalFormGame::new(game.row_actions().to_vec(), game.col_actions().to_vec(), payoffs)
}

/// Scenario file (TOML). Every key is optional; an empty file is the medium-speed setting.
///
/// ```toml
/// speed_class = "MEDIUM"
/// prior = "1/2"          # AV share p, number or fraction string
/// noise_amplitude = 0.0
/// [severity]
/// low = 0.6
/// high = 1.6
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub speed_class: SpeedClass,
    pub prior: Rational,
    pub severity: Severity,
    pub noise_amplitude: Rational,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            speed_class: SpeedClass::Medium,
            prior: frac(1, 2),
            severity: Severity::default(),
            noise_amplitude: Rational::zero(),
        }
    }
}

/// A number given either as a TOML number or as a string such as `"207/221"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub(crate) enum NumberText {
    Int(i64),
    Float(f64),
    Text(String),
}

impl NumberText {
    pub(crate) fn to_rational(&self, field: &str) -> Result<Rational> {
        match self {
            NumberText::Int(n) => Ok(int(*n)),
            NumberText::Float(f) => from_f64_decimal(*f).ok_or_else(|| Error::config(field, "not a finite number")),
            NumberText::Text(s) => {
                parse_rational(s).ok_or_else(|| Error::config(field, format!("`{s}` is not a number")))
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeverity {
    low: Option<NumberText>,
    high: Option<NumberText>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    speed_class: Option<String>,
    prior: Option<NumberText>,
    noise_amplitude: Option<NumberText>,
    #[serde(default)]
    severity: RawSeverity,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| toml_error(&e))?;
        let mut cfg = ScenarioConfig::default();
        if let Some(s) = raw.speed_class {
            cfg.speed_class = s.parse()?;
        }
        if let Some(p) = raw.prior {
            cfg.prior = p.to_rational("prior")?;
        }
        if let Some(a) = raw.noise_amplitude {
            cfg.noise_amplitude = a.to_rational("noise_amplitude")?;
        }
        if let Some(m) = raw.severity.low {
            cfg.severity.low = m.to_rational("severity.low")?;
        }
        if let Some(m) = raw.severity.high {
            cfg.severity.high = m.to_rational("severity.high")?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.prior.is_negative() || self.prior > Rational::one() {
            return Err(Error::config("prior", "must lie in [0, 1]"));
        }
        if self.severity.low.is_negative() {
            return Err(Error::config("severity.low", "must be >= 0"));
        }
        if self.severity.high.is_negative() {
            return Err(Error::config("severity.high", "must be >= 0"));
        }
        if self.noise_amplitude.is_negative() || self.noise_amplitude > frac(1, 2) {
            return Err(Error::config("noise_amplitude", "must lie in [0, 0.5]"));
        }
        Ok(())
    }

    pub fn tables(&self) -> ZebraPayoffTable {
        zebra_tables(self.speed_class, &self.severity)
    }
}

/// Maps a TOML deserialization error to a config error naming the key when possible.
pub(crate) fn toml_error(e: &toml::de::Error) -> Error {
    let message = e.message().to_string();
    let field = message
        .split('`')
        .nth(1)
        .filter(|_| message.contains('`'))
        .unwrap_or("config")
        .to_string();
    Error::config(field, message)
}

/// Payoff advantage check used by tests and callers that tweak the AV table:
/// true when Stop strictly beats Go for the driver against every cyclist action.
pub fn av_stop_strictly_dominant(av: &NormalFormGame) -> bool {
    (0..av.rows()).all(|r| av.payoff(Player::Col, r, 1) > av.payoff(Player::Col, r, 0))
}

//! Collision-rate sweep over the share of automated vehicles.

use super::rng::rng_stream;
use super::{check_iterations, run_iterations, standard_error};
use crate::error::{Error, Result};
use crate::normal_form::MixedStrategy;
use crate::rational::{frac, scaled_threshold, Rational};
use crate::scenario::{toml_error, zebra_equilibrium, NumberText, Severity, SpeedClass, ZebraPayoffTable};
use num_traits::{One, Signed};
use rand::RngCore;
use serde::Deserialize;

/// ```toml
/// seed = 42
/// iterations = 1000000
/// av_share = [0, 0.1, 0.2, "1/3", 1]
/// speed_classes = ["LOW", "MEDIUM", "HIGH"]
/// [severity]
/// low = 0.6
/// high = 1.6
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub iterations: u64,
    pub av_share: Vec<Rational>,
    pub speed_classes: Vec<SpeedClass>,
    pub severity: Severity,
    /// `None` uses rayon's default pool.
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            iterations: 1_000_000,
            av_share: (0..=10).map(|i| frac(i, 10)).collect(),
            speed_classes: SpeedClass::ALL.to_vec(),
            severity: Severity::default(),
            workers: None,
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
struct RawSweep {
    seed: Option<u64>,
    iterations: Option<u64>,
    av_share: Option<Vec<NumberText>>,
    speed_classes: Option<Vec<String>>,
    workers: Option<usize>,
    #[serde(default)]
    severity: RawSeverity,
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawSweep = toml::from_str(text).map_err(|e| toml_error(&e))?;
        let mut cfg = SweepConfig::default();
        cfg.seed = raw.seed.unwrap_or(cfg.seed);
        cfg.iterations = raw.iterations.unwrap_or(cfg.iterations);
        cfg.workers = raw.workers;
        if let Some(grid) = raw.av_share {
            cfg.av_share = grid.iter().map(|p| p.to_rational("av_share")).collect::<Result<_>>()?;
        }
        if let Some(classes) = raw.speed_classes {
            cfg.speed_classes = classes.iter().map(|s| s.parse()).collect::<Result<_>>()?;
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
        check_iterations(self.iterations)?;
        if self.av_share.is_empty() {
            return Err(Error::config("av_share", "grid is empty"));
        }
        if self.av_share.iter().any(|p| p.is_negative() || *p > Rational::one()) {
            return Err(Error::config("av_share", "values must lie in [0, 1]"));
        }
        if self.speed_classes.is_empty() {
            return Err(Error::config("speed_classes", "list is empty"));
        }
        if self.severity.low.is_negative() || self.severity.high.is_negative() {
            return Err(Error::config("severity", "multipliers must be >= 0"));
        }
        Ok(())
    }

    pub fn tables(&self) -> Vec<ZebraPayoffTable> {
        self.speed_classes
            .iter()
            .map(|&s| crate::scenario::zebra_tables(s, &self.severity))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: Rational,
    pub speed_class: SpeedClass,
    pub collisions: u64,
    pub iterations: u64,
    pub collision_rate: f64,
    /// Filled in by [`fatality_curve`].
    pub fatality_rate: Option<f64>,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ordered by speed class (table order), then by `p` (grid order).
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, speed: SpeedClass, p: &Rational) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.speed_class == speed && r.p == *p)
    }
}

/// Upper bounds of each action's slice of `[0, 2^64)`.
fn cumulative_thresholds(strategy: &MixedStrategy) -> Vec<u128> {
    let mut acc = Rational::from_integer(0.into());
    let mut out: Vec<u128> = strategy
        .probs()
        .iter()
        .map(|p| {
            acc += p;
            scaled_threshold(&acc)
        })
        .collect();
    *out.last_mut().expect("non-empty strategy") = 1u128 << 64;
    out
}

fn pick(thresholds: &[u128], word: u64) -> usize {
    let w = u128::from(word);
    thresholds.iter().position(|&t| w < t).expect("last threshold is 2^64")
}

#[derive(Clone)]
struct TypePlan {
    rows: Vec<u128>,
    cols: Vec<u128>,
    collision_cells: Vec<(usize, usize)>,
}

struct PointPlan {
    type_threshold: u128,
    types: Vec<TypePlan>,
}

/// Plays the equilibrium of each zebra table at every grid value of `p`.
///
/// Iteration `k` draws three words from stream `(seed, k)`: the vehicle type
/// (AV iff below `floor(p 2^64)`), the cyclist's action and the driver's action.
/// Every grid point and speed class reuses the same draws, so the estimated curve is
/// non-increasing in `p` sample by sample.
pub fn sweep_av_share(config: &SweepConfig, tables: &[ZebraPayoffTable]) -> Result<SweepResult> {
    config.validate()?;
    let mut plans = Vec::new();
    let mut labels = Vec::new();
    for table in tables {
        let eq = zebra_equilibrium(table)?;
        let cells = table.collision_cells();
        let types: Vec<_> = eq
            .per_type
            .iter()
            .zip(cells)
            .map(|(profile, collision_cells)| TypePlan {
                rows: cumulative_thresholds(&profile.row),
                cols: cumulative_thresholds(&profile.col),
                collision_cells,
            })
            .collect();
        for p in &config.av_share {
            plans.push(PointPlan {
                type_threshold: scaled_threshold(p),
                types: types.clone(),
            });
            labels.push((p.clone(), table.speed));
        }
    }

    let counts = run_iterations(
        config.iterations,
        config.workers,
        || vec![0u64; plans.len()],
        |k, tally| {
            let mut rng = rng_stream(config.seed, k);
            let (u_type, u_row, u_col) = (rng.next_u64(), rng.next_u64(), rng.next_u64());
            for (plan, count) in plans.iter().zip(tally.iter_mut()) {
                // type 0 is AV, type 1 the human driver
                let t = usize::from(u128::from(u_type) >= plan.type_threshold);
                let plan = &plan.types[t];
                let cell = (pick(&plan.rows, u_row), pick(&plan.cols, u_col));
                if plan.collision_cells.contains(&cell) {
                    *count += 1;
                }
            }
        },
    )?;

    let n = config.iterations;
    let rows = labels
        .into_iter()
        .zip(counts)
        .map(|((p, speed_class), collisions)| {
            let rate = collisions as f64 / n as f64;
            SweepRow {
                p,
                speed_class,
                collisions,
                iterations: n,
                collision_rate: rate,
                fatality_rate: None,
                standard_error: standard_error(rate, n),
            }
        })
        .collect();
    Ok(SweepResult { rows })
}

/// Multiplies each collision rate by its speed class's fatality rate.
pub fn fatality_curve(sweep: &SweepResult) -> SweepResult {
    SweepResult {
        rows: sweep
            .rows
            .iter()
            .map(|r| SweepRow {
                fatality_rate: Some(r.collision_rate * r.speed_class.fatality_rate()),
                ..r.clone()
            })
            .collect(),
    }
}

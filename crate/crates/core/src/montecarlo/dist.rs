//! Parameter distributions for the crossing experiments.

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Unit {
    #[serde(rename = "m")]
    Meters,
    #[serde(rename = "km/h")]
    KilometersPerHour,
    #[serde(rename = "m/s")]
    MetersPerSecond,
    #[serde(rename = "s")]
    Seconds,
}

impl Unit {
    /// Factor converting a value in this unit to SI.
    pub fn to_si(self) -> f64 {
        match self {
            Unit::KilometersPerHour => 1.0 / 3.6,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution1D {
    Constant {
        value: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Normal restricted to values strictly above `truncate_below` (rejection sampled).
    Gaussian {
        mean: f64,
        std: f64,
        truncate_below: f64,
    },
    /// `shift + Exp` with the given mean of the exponential part.
    ShiftedExponential {
        shift: f64,
        mean: f64,
    },
}

/// A distribution in stated units; samples are returned in SI.
///
/// ```toml
/// kind = "gaussian"   # constant | uniform | gaussian | shifted_exponential
/// mean = 50.0
/// std = 10.0
/// truncate_below = 1.0
/// units = "km/h"
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct DistributionSpec {
    pub kind: Distribution1D,
    pub units: Unit,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    units: Unit,
    value: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    mean: Option<f64>,
    std: Option<f64>,
    truncate_below: Option<f64>,
    shift: Option<f64>,
}

impl TryFrom<RawSpec> for DistributionSpec {
    type Error = String;

    fn try_from(raw: RawSpec) -> std::result::Result<Self, String> {
        let given = [
            ("value", raw.value),
            ("lo", raw.lo),
            ("hi", raw.hi),
            ("mean", raw.mean),
            ("std", raw.std),
            ("truncate_below", raw.truncate_below),
            ("shift", raw.shift),
        ];
        let expected: &[&str] = match raw.kind.as_str() {
            "constant" => &["value"],
            "uniform" => &["lo", "hi"],
            "gaussian" => &["mean", "std", "truncate_below"],
            "shifted_exponential" => &["shift", "mean"],
            other => return Err(format!("unknown distribution kind `{other}`")),
        };
        for (name, v) in given {
            match (expected.contains(&name), v.is_some()) {
                (true, false) => return Err(format!("{} distribution needs `{name}`", raw.kind)),
                (false, true) => return Err(format!("`{name}` does not apply to a {} distribution", raw.kind)),
                _ => {}
            }
        }
        let get = |name: &str| given.iter().find(|g| g.0 == name).and_then(|g| g.1).unwrap_or(0.0);
        let kind = match raw.kind.as_str() {
            "constant" => Distribution1D::Constant { value: get("value") },
            "uniform" => Distribution1D::Uniform {
                lo: get("lo"),
                hi: get("hi"),
            },
            "gaussian" => Distribution1D::Gaussian {
                mean: get("mean"),
                std: get("std"),
                truncate_below: get("truncate_below"),
            },
            _ => Distribution1D::ShiftedExponential {
                shift: get("shift"),
                mean: get("mean"),
            },
        };
        Ok(DistributionSpec { kind, units: raw.units })
    }
}

impl DistributionSpec {
    pub fn constant(value: f64, units: Unit) -> Self {
        Self {
            kind: Distribution1D::Constant { value },
            units,
        }
    }

    pub fn uniform(lo: f64, hi: f64, units: Unit) -> Self {
        Self {
            kind: Distribution1D::Uniform { lo, hi },
            units,
        }
    }

    pub fn gaussian(mean: f64, std: f64, truncate_below: f64, units: Unit) -> Self {
        Self {
            kind: Distribution1D::Gaussian {
                mean,
                std,
                truncate_below,
            },
            units,
        }
    }

    pub fn shifted_exponential(shift: f64, mean: f64, units: Unit) -> Self {
        Self {
            kind: Distribution1D::ShiftedExponential { shift, mean },
            units,
        }
    }

    /// Checks parameters, naming `field` on failure.
    pub fn validate(&self, field: &str) -> Result<()> {
        let bad = |msg: &str| Err(Error::config(field, msg));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self.kind {
            Distribution1D::Constant { value } if !finite(&[value]) => bad("value must be finite"),
            Distribution1D::Uniform { lo, hi } if !(finite(&[lo, hi]) && lo < hi) => bad("uniform needs lo < hi"),
            Distribution1D::Gaussian {
                mean,
                std,
                truncate_below,
            } => {
                if !finite(&[mean, std, truncate_below]) || std <= 0.0 {
                    bad("gaussian needs finite mean and std > 0")
                } else if truncate_below >= mean {
                    bad("truncation bound must lie below the mean")
                } else {
                    Ok(())
                }
            }
            Distribution1D::ShiftedExponential { shift, mean } if !(finite(&[shift, mean]) && mean > 0.0) => {
                bad("shifted exponential needs mean > 0")
            }
            _ => Ok(()),
        }
    }

    /// Smallest value the distribution can produce, in SI.
    pub fn lower_bound(&self) -> f64 {
        let raw = match self.kind {
            Distribution1D::Constant { value } => value,
            Distribution1D::Uniform { lo, .. } => lo,
            Distribution1D::Gaussian { truncate_below, .. } => truncate_below,
            Distribution1D::ShiftedExponential { shift, .. } => shift,
        };
        raw * self.units.to_si()
    }

    /// Draws one value, converted to SI.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let raw = match self.kind {
            Distribution1D::Constant { value } => value,
            Distribution1D::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Distribution1D::Gaussian {
                mean,
                std,
                truncate_below,
            } => {
                let normal = Normal::new(mean, std).expect("validated");
                loop {
                    let x = normal.sample(rng);
                    if x > truncate_below {
                        break x;
                    }
                }
            }
            Distribution1D::ShiftedExponential { shift, mean } => {
                shift + Exp::new(1.0 / mean).expect("validated").sample(rng)
            }
        };
        raw * self.units.to_si()
    }
}

//! Seeded Monte Carlo experiments.
//!
//! Iterations draw from [`rng::rng_stream`] and are tallied into integer counts,
//! so results are bit-identical for any worker count.

pub mod csv;
pub mod dist;
pub mod entry;
pub mod rng;
pub mod sweep;

pub use dist::{Distribution1D, DistributionSpec, Unit};
pub use entry::{
    entry_histogram, misjudgment_experiment, CrossingProfile, ExperimentConfig, OutcomeHistogram, SimConfig,
};
pub use rng::rng_stream;
pub use sweep::{fatality_curve, sweep_av_share, SweepConfig, SweepResult, SweepRow};

use crate::error::{Error, Result};
use rayon::prelude::*;

const CHUNK: u64 = 1 << 14;

/// Binomial standard error `sqrt(r (1 - r) / n)`.
pub fn standard_error(rate: f64, iterations: u64) -> f64 {
    (rate * (1.0 - rate) / iterations as f64).sqrt()
}

/// Integer tallies merged across chunks.
pub(crate) trait Tally: Send {
    fn merge(&mut self, other: Self);
}

/// Runs `per_iteration(k, tally)` for `k in 0..iterations` on `workers` threads
/// (`None`: rayon's default pool).
pub(crate) fn run_iterations<T, I, F>(iterations: u64, workers: Option<usize>, init: I, per_iteration: F) -> Result<T>
where
    T: Tally,
    I: Fn() -> T + Sync,
    F: Fn(u64, &mut T) + Sync,
{
    let job = || {
        (0..iterations.div_ceil(CHUNK))
            .into_par_iter()
            .map(|chunk| {
                let mut tally = init();
                for k in chunk * CHUNK..((chunk + 1) * CHUNK).min(iterations) {
                    per_iteration(k, &mut tally);
                }
                tally
            })
            .reduce(&init, |mut a, b| {
                a.merge(b);
                a
            })
    };
    match workers {
        None => Ok(job()),
        Some(0) => Err(Error::config("workers", "must be >= 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))
            .map(|pool| pool.install(job)),
    }
}

pub(crate) fn check_iterations(iterations: u64) -> Result<()> {
    if iterations == 0 {
        return Err(Error::config("iterations", "must be >= 1"));
    }
    Ok(())
}

impl Tally for Vec<u64> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

//! Reference computations written independently of the library code.
#![allow(dead_code)]

use statrs::distribution::{ContinuousCDF, Normal};

pub const KMH: f64 = 1.0 / 3.6;
pub const T_A: f64 = 3.75 / 1.4;
pub const DECEL: f64 = -2.5;

/// Arrival time of a vehicle that reacts for `t_r` then brakes at `DECEL`,
/// in the `(sqrt(v^2 + 2 a d) - v) / a` form; `None` if it stops short.
pub fn brake_arrival(d: f64, v: f64, t_r: f64) -> Option<f64> {
    let d_r = v * t_r;
    if d_r >= d {
        return Some(d / v);
    }
    let disc = v * v + 2.0 * DECEL * (d - d_r);
    if disc < 0.0 {
        return None;
    }
    Some(t_r + (disc.sqrt() - v) / DECEL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    CrossKeep,
    CrossBrake,
    Out,
}

pub fn case_of(d: f64, v: f64, t_r: f64) -> Case {
    if T_A < d / v {
        Case::CrossKeep
    } else if brake_arrival(d, v, t_r).is_none_or(|t| T_A < t) {
        Case::CrossBrake
    } else {
        Case::Out
    }
}

/// Speeds (m/s) at the midpoints of `n` equal-probability cells of N(mean, sd) km/h
/// truncated below at `lower` km/h.
pub fn truncated_normal_grid(mean: f64, sd: f64, lower: f64, n: usize) -> Vec<f64> {
    let normal = Normal::new(mean, sd).unwrap();
    let base = normal.cdf(lower);
    (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            normal.inverse_cdf(base + u * (1.0 - base)) * KMH
        })
        .collect()
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

/// Fractions `[CK, CB, OUT]` for d ~ U(10, 50) m and speed ~ N(mean, 10) km/h truncated
/// at 1 km/h, reaction `t_r`, on an `n x n` midpoint grid.
pub fn entry_fractions(mean_kmh: f64, t_r: f64, n: usize) -> [f64; 3] {
    let ds = uniform_grid(10.0, 50.0, n);
    let vs = truncated_normal_grid(mean_kmh, 10.0, 1.0, n);
    let mut counts = [0u64; 3];
    for &d in &ds {
        for &v in &vs {
            counts[case_of(d, v, t_r) as usize] += 1;
        }
    }
    let total = (n * n) as f64;
    counts.map(|c| c as f64 / total)
}

/// Misjudgment study with the pedestrian planning for reaction `assumed` while the true
/// reaction is `0.8 + Exp(mean 0.2)`. Returns `(cross, misjudged crossings, collisions)`
/// as fractions. The reaction dimension is integrated in closed form: a crossing
/// ends in collision iff the true reaction exceeds the root of `brake_arrival = T_A`.
pub fn misjudgment_fractions(assumed: f64, n: usize) -> (f64, f64, f64) {
    let survival = |t: f64| if t <= 0.8 { 1.0 } else { (-(t - 0.8) / 0.2).exp() };
    let ds = uniform_grid(10.0, 50.0, n);
    let vs = truncated_normal_grid(50.0, 10.0, 1.0, n);
    let (mut cross, mut collide) = (0.0, 0.0);
    for &d in &ds {
        for &v in &vs {
            match case_of(d, v, assumed) {
                Case::Out => {}
                Case::CrossKeep => cross += 1.0,
                Case::CrossBrake => {
                    cross += 1.0;
                    // arrival is non-increasing in t_r and equals d/v <= T_A once v t_r >= d
                    let late = |t: f64| brake_arrival(d, v, t).is_none_or(|a| a >= T_A);
                    let (mut lo, mut hi) = (0.0, d / v);
                    if late(lo) {
                        for _ in 0..80 {
                            let mid = 0.5 * (lo + hi);
                            if late(mid) {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        collide += survival(hi);
                    } else {
                        collide += 1.0;
                    }
                }
            }
        }
    }
    let total = (n * n) as f64;
    let cross = cross / total;
    (cross, cross * survival(assumed), collide / total)
}

/// `entry_fractions(30, 0, 2000)`, frozen.
pub const AV_ORACLE: [f64; 3] = [0.68760725, 0.18863925, 0.1237535];
/// `entry_fractions(50, 1.5, 2000)`, frozen.
pub const HUMAN_ORACLE: [f64; 3] = [0.32317575, 0.0419495, 0.63487475];
/// `misjudgment_fractions(1.5, 2000)`, frozen.
pub const MISJUDGMENT_ORACLE: (f64, f64, f64) = (0.36512525, 0.011025827171419905, 0.00035886138320344015);
/// Probability that `0.8 + Exp(mean 0.2)` exceeds 1.5 s.
pub fn global_misjudgment_oracle() -> f64 {
    (-3.5f64).exp()
}

/// `|estimate - expected|` in units of `se`; zero when both agree exactly.
pub fn z_score(estimate: f64, expected: f64, se: f64) -> f64 {
    let diff = (estimate - expected).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / se
    }
}

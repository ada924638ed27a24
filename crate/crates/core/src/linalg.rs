//! Exact Gauss-Jordan elimination over rationals for the small systems the
//! equilibrium and dominance solvers produce.

use crate::rational::Rational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent with a solution space of positive dimension.
    Underdetermined {
        rank: usize,
    },
    Inconsistent,
}

/// Solves `a x = b` where `a` is `m x n` (any shape).
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    debug_assert_eq!(rows, b.len());
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::with_capacity(cols);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pivot);
        let inv = Rational::one() / &aug[rank][col];
        for entry in aug[rank].iter_mut().skip(col) {
            *entry *= &inv;
        }
        for r in 0..rows {
            if r == rank || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in col..=cols {
                let delta = &factor * &aug[rank][c];
                aug[r][c] -= delta;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    if aug[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    if rank < cols {
        return Solution::Underdetermined { rank };
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Solution::Unique(x)
}

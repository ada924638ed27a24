//! Exact optimal strategies of two-player zero-sum matrix games.
//!
//! The column player's problem `max 1·y s.t. M'y <= 1, y >= 0` on a strictly
//! positive shift `M' = M + c` is solved with a dense rational simplex using
//! Bland's rule, so it always terminates. The row player's optimal strategy is
//! read off the final tableau's slack prices.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumSolution {
    /// Game value for the row (maximizing) player.
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

/// Solves `max_x min_y xᵀ M y` exactly. `matrix` must be non-empty and rectangular.
pub fn solve_zero_sum(matrix: &[Vec<Rational>]) -> ZeroSumSolution {
    let m = matrix.len();
    let n = matrix[0].len();
    let min = matrix.iter().flatten().min().expect("non-empty matrix").clone();
    let shift = Rational::one() - min;

    // columns: y_0..y_{n-1}, s_0..s_{m-1}, rhs
    let width = n + m + 1;
    let mut tableau: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for j in 0..n {
                row[j] = &matrix[i][j] + &shift;
            }
            row[n + i] = Rational::one();
            row[width - 1] = Rational::one();
            row
        })
        .collect();
    let mut objective = vec![Rational::zero(); width];
    for entry in objective.iter_mut().take(n) {
        *entry = -Rational::one();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(entering) = (0..n + m).find(|&c| objective[c].is_negative()) {
        let mut leaving: Option<(usize, Rational)> = None;
        for (r, row) in tableau.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((best_r, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*best_r]),
            };
            if better {
                leaving = Some((r, ratio));
            }
        }
        // bounded: every column of M' is strictly positive
        let (pivot_row, _) = leaving.expect("zero-sum LP is bounded");
        pivot(&mut tableau, &mut objective, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    let total = objective[width - 1].clone();
    let shifted_value = Rational::one() / &total;
    let row_strategy: Vec<Rational> = (0..m).map(|i| &objective[n + i] * &shifted_value).collect();
    let mut col_strategy = vec![Rational::zero(); n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            col_strategy[var] = &tableau[r][width - 1] * &shifted_value;
        }
    }
    ZeroSumSolution {
        value: shifted_value - shift,
        row_strategy,
        col_strategy,
    }
}

fn pivot(tableau: &mut [Vec<Rational>], objective: &mut [Rational], row: usize, col: usize) {
    let inv = Rational::one() / &tableau[row][col];
    for entry in tableau[row].iter_mut() {
        *entry *= &inv;
    }
    let pivot_row = tableau[row].clone();
    for (r, other) in tableau.iter_mut().enumerate() {
        if r == row || other[col].is_zero() {
            continue;
        }
        let factor = other[col].clone();
        for (entry, p) in other.iter_mut().zip(&pivot_row) {
            *entry -= &factor * p;
        }
    }
    if !objective[col].is_zero() {
        let factor = objective[col].clone();
        for (entry, p) in objective.iter_mut().zip(&pivot_row) {
            *entry -= &factor * p;
        }
    }
}

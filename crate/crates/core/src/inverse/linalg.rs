//! Column-equilibrated least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::invariants::MAX_CONDITION;

#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: DVector<f64>,
    /// Condition number after column scaling.
    pub condition_number: f64,
    /// Smallest singular value after column scaling, relative to the largest.
    pub relative_sigma_min: f64,
    /// `max |A x - b| / max(1, max |b|)`.
    pub residual: f64,
}

/// Scales columns to unit norm, solves by SVD and undoes the scaling.
/// Fails with [`Error::RankDeficient`] when the scaled condition number
/// exceeds [`MAX_CONDITION`].
pub fn solve_equilibrated(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LeastSquares> {
    let sol = solve_unchecked(a, b)?;
    if sol.condition_number > MAX_CONDITION {
        return Err(Error::RankDeficient(sol.relative_sigma_min));
    }
    Ok(sol)
}

/// As [`solve_equilibrated`] without the conditioning threshold.
pub fn solve_unchecked(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LeastSquares> {
    if a.nrows() < a.ncols() || a.nrows() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "least squares shape {}x{} with {} data",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let scales: Vec<f64> = (0..a.ncols())
        .map(|j| a.column(j).norm())
        .map(|s| if s > 0.0 { s } else { 1.0 })
        .collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let rel = if smax > 0.0 { smin / smax } else { 0.0 };
    let cond = if rel > 0.0 { 1.0 / rel } else { f64::INFINITY };
    let mut x = svd
        .solve(b, 0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    for (j, s) in scales.iter().enumerate() {
        x[j] /= s;
    }
    let r = a * &x - b;
    let bmax = b.amax().max(1.0);
    Ok(LeastSquares {
        residual: r.amax() / bmax,
        solution: x,
        condition_number: cond,
        relative_sigma_min: rel,
    })
}

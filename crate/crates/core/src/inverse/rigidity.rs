//! Smallest singular value of the linearized isospectral map at a quadratic
//! potential.

use nalgebra::DMatrix;

use super::report::{Recovered, RecoveryReport};
use crate::averaging::{gamma_coeff, Potential};
use crate::error::{Error, Result};
use crate::invariants::gaussian::gamma_half;

/// `(lambda, mu)` grid; `mu_1 = lambda + mu a`, `mu_2 = lambda + mu b`.
const LAMBDAS: [f64; 8] = [0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.75, 2.0];
const MUS: [f64; 8] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.65, 0.8, 1.0];

/// `sigma_min` of `W -> { int e^{-mu_1 x_1^2 - mu_2 x_2^2} A_0 W dx }` on even
/// polynomials of degree `<= degree`, sampled on a wedge grid, after scaling
/// columns to unit norm.
pub fn rigidity_svd(v0: &Potential<f64>, degree: u32) -> Result<RecoveryReport> {
    if v0.dim() != 2
        || v0.degree() > 2
        || v0.coeff(&[1, 1]) != 0.0
        || v0.coeff(&[1, 0]) != 0.0
        || v0.coeff(&[0, 1]) != 0.0
    {
        return Err(Error::InvalidArgument(
            "rigidity needs V_0 = a x_1^2 + b x_2^2 (+ constant)".into(),
        ));
    }
    let (a, b) = (v0.coeff(&[2, 0]), v0.coeff(&[0, 2]));
    let cols: Vec<(u32, u32)> = (0..=degree / 2)
        .flat_map(|s| (0..=s).map(move |i| (i, s - i)))
        .collect();
    let rows: Vec<(f64, f64)> = LAMBDAS
        .iter()
        .flat_map(|&l| MUS.iter().map(move |&m| (l + m * a, l + m * b)))
        .filter(|(m1, m2)| *m1 > 0.0 && *m2 > 0.0)
        .collect();
    if rows.len() < cols.len() {
        return Err(Error::InvalidArgument(
            "wedge grid leaves too few samples".into(),
        ));
    }
    let mut mat = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        let (m1, m2) = rows[r];
        let (i, j) = cols[c];
        gamma_coeff(i, 0) * gamma_coeff(j, 0) * gamma_half(2 * i + 1) * gamma_half(2 * j + 1)
            / (m1.powf(f64::from(i) + 0.5) * m2.powf(f64::from(j) + 0.5))
    });
    for mut col in mat.column_iter_mut() {
        let n = col.norm();
        col /= n;
    }
    let sv = mat.singular_values();
    let value = sv.min();
    Ok(RecoveryReport::new(Recovered::SingularValue { value })
        .condition("scaled", sv.max() / value))
}

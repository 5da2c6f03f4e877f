//! Even one-dimensional potentials from circle averages (Abel inversion).

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use super::linalg::solve_equilibrated;
use super::oracle::InvariantOracle;
use super::report::{AmbiguityFlags, Recovered, RecoveryReport};
use crate::averaging::Potential;
use crate::error::{Error, Result};
use crate::invariants::PolyFn;

/// Energy used in place of the origin sample, where the sphere degenerates.
pub const ORIGIN_ENERGY: f64 = 1e-6;

/// `int_0^{pi/2} psi(y sin^2 t) dt` split over the cells of `psi` (piecewise
/// linear in `u` on `u_j = j h`): returns the weights of `psi_0..=psi_i`.
fn abel_row(i: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; i + 1];
    if i == 0 {
        w[0] = FRAC_PI_2;
        return w;
    }
    let y = i as f64 * h;
    let theta = |u: f64| (u / y).sqrt().min(1.0).asin();
    let prim = |t: f64| y * (t / 2.0 - (2.0 * t).sin() / 4.0);
    for j in 0..i {
        let (ua, ub) = (j as f64 * h, (j + 1) as f64 * h);
        let (ta, tb) = (theta(ua), theta(ub));
        let i0 = tb - ta;
        let i1 = prim(tb) - prim(ta);
        let slope = (i1 - ua * i0) / h;
        w[j] += i0 - slope;
        w[j + 1] += slope;
    }
    w
}

/// Forward solve of the lower-triangular product-integration system.
fn invert(g: &[f64], h: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(g.len());
    for (i, gi) in g.iter().enumerate() {
        let w = abel_row(i, h);
        let known: f64 = w[..i].iter().zip(&psi).map(|(a, b)| a * b).sum();
        psi.push((FRAC_PI_2 * gi - known) / w[i]);
    }
    psi
}

/// Recovers `V` on `s_i = sqrt(i h)`, `h = r_max^2 / (len - 1)`, from the
/// circle averages `g_i` of `V` at radius `s_i`.
///
/// The circle average is `(2/pi) int_0^{pi/2} V(r cos t) dt`; with `u = s^2`
/// it is an Abel integral in `psi(u) = V(sqrt u)`, inverted exactly for
/// piecewise-linear `psi`. The residual compares against the inversion on
/// the half-resolution grid and must stay below `tol`.
pub fn recover_even_1d(g: &[f64], r_max: f64, tol: f64) -> Result<RecoveryReport> {
    let m = g.len();
    if m < 5 || m % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "need an odd number (>= 5) of samples, got {m}"
        )));
    }
    if !(r_max.is_finite() && r_max > 0.0) || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "samples and radius must be finite".into(),
        ));
    }
    let h = r_max * r_max / (m - 1) as f64;
    let fine = invert(g, h);
    let coarse_in: Vec<f64> = g.iter().step_by(2).copied().collect();
    let coarse = invert(&coarse_in, 2.0 * h);
    let scale = fine.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let residual = coarse
        .iter()
        .zip(fine.iter().step_by(2))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    if residual > tol {
        return Err(Error::Residual {
            residual,
            tolerance: tol,
            context: "grid too coarse for Abel inversion".into(),
        });
    }
    let s: Vec<f64> = (0..m).map(|i| (i as f64 * h).sqrt()).collect();
    Ok(RecoveryReport::new(Recovered::Profile {
        s,
        values: fine,
        fit: None,
    })
    .residual("resolution", residual)
    .flags(AmbiguityFlags::default()))
}

/// Circle averages `g_i` at `r_i^2 = i h` from an oracle (`H_0 = r^2/2`).
pub fn sphere_samples(oracle: &dyn InvariantOracle, r_max: f64, count: usize) -> Result<Vec<f64>> {
    let h = r_max * r_max / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let e = if i == 0 {
                ORIGIN_ENERGY
            } else {
                0.5 * i as f64 * h
            };
            oracle.sphere(e, &PolyFn::identity())
        })
        .collect()
}

/// Least-squares fit of `sum_{k <= degree/2} c_k x^{2k}` to the samples.
pub fn fit_even_polynomial(
    s: &[f64],
    values: &[f64],
    degree: u32,
) -> Result<(Potential<f64>, f64)> {
    let k = (degree / 2 + 1) as usize;
    let a = DMatrix::from_fn(s.len(), k, |i, j| s[i].powi(2 * j as i32));
    let sol = solve_equilibrated(&a, &DVector::from_column_slice(values))?;
    let mut v = Potential::zero(1);
    for j in 0..k {
        v.add_term(&[2 * j as u32], sol.solution[j]);
    }
    Ok((v, sol.residual))
}

/// Oracle-driven recovery; with `fit_degree` the profile is also fitted by
/// an even polynomial whose circle averages are compared with the data.
pub fn recover_even_1d_from_oracle(
    oracle: &dyn InvariantOracle,
    r_max: f64,
    count: usize,
    fit_degree: Option<u32>,
    tol: f64,
) -> Result<RecoveryReport> {
    if oracle.dim() != 1 {
        return Err(Error::UnsupportedDimension(oracle.dim()));
    }
    let g = sphere_samples(oracle, r_max, count)?;
    let mut report = recover_even_1d(&g, r_max, tol)?;
    if let (Some(d), Recovered::Profile { s, values, fit }) = (fit_degree, &mut report.recovered) {
        let (v, _) = fit_even_polynomial(s, values, d)?;
        let h = r_max * r_max / (count - 1) as f64;
        let mut worst = 0.0f64;
        for (i, gi) in g.iter().enumerate() {
            let e = if i == 0 {
                ORIGIN_ENERGY
            } else {
                0.5 * i as f64 * h
            };
            let forward = crate::invariants::sphere_invariant_poly(&v, e, &PolyFn::identity())?;
            worst = worst.max((forward - gi).abs());
        }
        *fit = Some(v);
        report = report.residual("forward_fit", worst);
    }
    Ok(report)
}

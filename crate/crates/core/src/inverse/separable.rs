//! Separable potentials `f_1(x_1^2) + f_2(x_2^2)` from sphere moments.
//!
//! On the sphere `|z|^2 = R` the value `|z_2|^2 / R = u` is uniform on
//! `[0, 1]`, so the averaged potential is `psi_R(u) = phi_1(R(1-u)) +
//! phi_2(R u)` with `phi_j` the circle averages of `f_j(x^2)`. The sphere
//! moments are the moments of `psi_R(U)`; for monotone `psi_R` they fix it
//! up to `u -> 1 - u`, which is the coordinate swap.

use nalgebra::{DMatrix, DVector};

use super::even1d::{recover_even_1d, ORIGIN_ENERGY};
use super::linalg::solve_unchecked;
use super::oracle::InvariantOracle;
use super::report::{AmbiguityFlags, Recovered, RecoveryReport};
use crate::error::{Error, Result};
use crate::invariants::{gauss_legendre, PolyFn};
use crate::scalar::binomial;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparableOptions {
    /// Largest `|z|^2` sampled.
    pub rho_max: f64,
    /// Number of `|z|^2` grid points (odd).
    pub count: usize,
    /// Number of sphere moments matched per radius.
    pub moments: usize,
    /// Degree of the polynomial profile fitted in `u`.
    pub degree: usize,
    /// Nodes on which monotonicity is checked.
    pub check_nodes: usize,
    /// Tolerance on the split consistency residual.
    pub tol: f64,
}

impl Default for SeparableOptions {
    fn default() -> Self {
        SeparableOptions {
            rho_max: 1.0,
            count: 41,
            moments: 12,
            degree: 4,
            check_nodes: 200,
            tol: 1e-3,
        }
    }
}

/// `((s - m) / sigma)^k` as a polynomial in `s`.
fn standardized_power(m: f64, sigma: f64, k: usize) -> PolyFn {
    let c = (0..=k)
        .map(|j| binomial(k as u32, j as u32) * (-m).powi((k - j) as i32) / sigma.powi(k as i32))
        .collect();
    PolyFn(c)
}

fn eval_poly(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * u + a)
}

fn eval_deriv(c: &[f64], u: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, a)| acc * u + i as f64 * a)
}

/// Fits `xi(u) = sum c_i u^i` with `E[xi(U)^k] = target[k-1]` by damped
/// Gauss-Newton, starting from the increasing linear profile of unit variance.
fn fit_profile(target: &[f64], degree: usize) -> Result<(Vec<f64>, f64)> {
    let (gx, gw) = gauss_legendre(6 * target.len() + 2 * degree);
    let nodes: Vec<(f64, f64)> = gx
        .iter()
        .zip(&gw)
        .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let weights: Vec<f64> = target.iter().map(|t| 1.0 / t.abs().max(1.0)).collect();
    let eval = |c: &[f64]| -> (DVector<f64>, DMatrix<f64>) {
        let kk = target.len();
        let mut r = DVector::zeros(kk);
        let mut jac = DMatrix::zeros(kk, c.len());
        for &(u, w) in &nodes {
            let xi = eval_poly(c, u);
            let mut pw = 1.0; // xi^{k-1}
            for k in 1..=kk {
                r[k - 1] += w * pw * xi;
                let mut ui = 1.0;
                for i in 0..c.len() {
                    jac[(k - 1, i)] += w * k as f64 * pw * ui;
                    ui *= u;
                }
                pw *= xi;
            }
        }
        for k in 0..kk {
            r[k] = (r[k] - target[k]) * weights[k];
            jac.row_mut(k).scale_mut(weights[k]);
        }
        (r, jac)
    };
    let mut c = vec![0.0; degree + 1];
    c[0] = -3f64.sqrt();
    c[1] = 2.0 * 3f64.sqrt();
    let (mut r, mut jac) = eval(&c);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..500 {
        if cost < 1e-30 {
            break;
        }
        let n = c.len();
        let jtj = jac.transpose() * &jac;
        let mut aug = DMatrix::zeros(jac.nrows() + n, n);
        aug.view_mut((0, 0), (jac.nrows(), n)).copy_from(&jac);
        for i in 0..n {
            aug[(jac.nrows() + i, i)] = (lambda * jtj[(i, i)].max(1e-12)).sqrt();
        }
        let mut rhs = DVector::zeros(jac.nrows() + n);
        rhs.rows_mut(0, jac.nrows()).copy_from(&(-&r));
        let step = solve_unchecked(&aug, &rhs)?.solution;
        let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
        let (tr, tj) = eval(&trial);
        let tcost = tr.norm_squared();
        if tcost < cost {
            let done = (cost - tcost) < 1e-16 * cost && step.amax() < 1e-14;
            c = trial;
            r = tr;
            jac = tj;
            cost = tcost;
            lambda = (lambda / 3.0).max(1e-15);
            if done {
                break;
            }
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    Ok((c, r.amax()))
}

/// Recovers `phi_1, phi_2` on `R_i = i rho_max / (count - 1)` and `f_1, f_2`
/// (by Abel inversion) at `s = R_i`, with `phi_2(0) = 0`.
///
/// Fails with [`Error::Genericity`] when a fitted profile is not strictly
/// monotone or when the recovered `phi_j` do not reproduce the profiles at
/// interior `u` (the case `f_1 = f_2`, whose profile is symmetric).
pub fn recover_separable(
    oracle: &dyn InvariantOracle,
    opts: &SeparableOptions,
) -> Result<RecoveryReport> {
    if oracle.dim() != 2 {
        return Err(Error::UnsupportedDimension(oracle.dim()));
    }
    if opts.count < 5 || opts.count % 2 == 0 || opts.moments < 3 || opts.degree == 0 {
        return Err(Error::InvalidArgument(
            "separable recovery needs an odd grid of >= 5 points and >= 3 moments".into(),
        ));
    }
    let v0 = oracle.sphere(ORIGIN_ENERGY, &PolyFn::identity())?;
    let h = opts.rho_max / (opts.count - 1) as f64;
    let mut profiles: Vec<(f64, f64, Vec<f64>)> = vec![(v0, 0.0, vec![0.0])];
    let mut moment_residual = 0.0f64;
    for i in 1..opts.count {
        let e = 0.5 * i as f64 * h;
        let m = oracle.sphere(e, &PolyFn::identity())?;
        let var = oracle.sphere(e, &standardized_power(m, 1.0, 2))?;
        if !(var > 1e-14 * m.abs().max(1.0).powi(2)) {
            return Err(Error::Genericity(format!(
                "profile at |z|^2 = {} is constant",
                i as f64 * h
            )));
        }
        let sigma = var.sqrt();
        let target: Vec<f64> = (1..=opts.moments)
            .map(|k| oracle.sphere(e, &standardized_power(m, sigma, k)))
            .collect::<Result<_>>()?;
        let (c, res) = fit_profile(&target, opts.degree)?;
        moment_residual = moment_residual.max(res);
        let min_slope = (0..=opts.check_nodes)
            .map(|q| eval_deriv(&c, q as f64 / opts.check_nodes as f64))
            .fold(f64::INFINITY, f64::min);
        if min_slope <= 1e-6 {
            return Err(Error::Genericity(format!(
                "profile at |z|^2 = {} is not strictly monotone",
                i as f64 * h
            )));
        }
        profiles.push((m, sigma, c));
    }
    let psi = |i: usize, u: f64| {
        let (m, s, c) = &profiles[i];
        m + s * eval_poly(c, u)
    };
    let phi1: Vec<f64> = (0..opts.count)
        .map(|i| if i == 0 { v0 } else { psi(i, 0.0) })
        .collect();
    let phi2: Vec<f64> = (0..opts.count)
        .map(|i| if i == 0 { 0.0 } else { psi(i, 1.0) - v0 })
        .collect();
    let scale = phi1.iter().chain(&phi2).fold(1.0f64, |a, b| a.max(b.abs()));
    let mut split_residual = 0.0f64;
    for k in 1..opts.count {
        for i in 0..=k {
            let u = i as f64 / k as f64;
            split_residual = split_residual.max((psi(k, u) - phi1[k - i] - phi2[i]).abs() / scale);
        }
    }
    if split_residual > opts.tol {
        return Err(Error::Genericity(format!(
            "profiles are not separable-monotone (split residual {split_residual:e})"
        )));
    }
    let abel = |phi: &[f64]| -> Result<(Vec<f64>, f64)> {
        let rep = recover_even_1d(phi, opts.rho_max.sqrt(), f64::INFINITY)?;
        match rep.recovered {
            Recovered::Profile { values, .. } => Ok((
                values,
                rep.residuals.get("resolution").copied().unwrap_or(0.0),
            )),
            _ => unreachable!("even recovery returns a profile"),
        }
    };
    let (f1, r1) = abel(&phi1)?;
    let (f2, r2) = abel(&phi2)?;
    let rho = (0..opts.count).map(|i| i as f64 * h).collect();
    Ok(RecoveryReport::new(Recovered::Separable {
        rho,
        phi1,
        phi2,
        f1,
        f2,
    })
    .residual("moments", moment_residual)
    .residual("split", split_residual)
    .residual("abel_resolution", r1.max(r2))
    .flags(AmbiguityFlags {
        swap: true,
        constant_split: true,
        ..AmbiguityFlags::default()
    }))
}

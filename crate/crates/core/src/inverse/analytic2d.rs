//! Even two-dimensional potentials with a non-degenerate quadratic part,
//! and their semiclassical families.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::hessian::{recover_hessian, recover_origin_value};
use super::linalg::solve_equilibrated;
use super::oracle::InvariantOracle;
use super::report::{AmbiguityFlags, Recovered, RecoveryReport};
use crate::averaging::{a0_invert, average_poly, Potential};
use crate::error::{Error, Result};
use crate::invariants::{compose_poly, gaussian_phase_integral, PolyFn};
use crate::scalar::binomial;
use crate::symbolcalc::PhasePolynomial;

/// Relative gap below which `a` and `b` count as equal.
pub const DEGENERACY_TOL: f64 = 1e-6;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `int e^{-H_0} q^k |z_1|^{2i} |z_2|^{2j} dx dp` with `q = (a|z_1|^2 + b|z_2|^2)/2`.
pub fn radial_moment(a: f64, b: f64, k: u32, i: u32, j: u32) -> f64 {
    let s: f64 = (0..=k)
        .map(|r| {
            binomial(k, r)
                * a.powi(r as i32)
                * b.powi((k - r) as i32)
                * factorial(r + i)
                * factorial(k - r + j)
        })
        .sum();
    4.0 * PI * PI * 2f64.powi((i + j) as i32) * s
}

/// `int e^{-H_0} [P]_d dx dp`.
fn homogeneous_moment(p: &PhasePolynomial<f64>, d: u32) -> f64 {
    gaussian_phase_integral(&p.homogeneous_part(d), 0.5).re
}

/// `(s - c)^k`.
fn shifted_power(c: f64, k: u32) -> PolyFn {
    PolyFn(
        (0..=k)
            .map(|j| binomial(k, j) * (-c).powi((k - j) as i32))
            .collect(),
    )
}

/// Solves `sum_{i+j=m} y_ij weight * radial_moment(a, b, k, i, j) = rhs_k`
/// for the `A_0`-image `sum y_ij x_1^{2i} x_2^{2j}` and returns its preimage.
fn solve_homogeneous(
    a: f64,
    b: f64,
    m: u32,
    rows: &[(u32, f64, f64)],
) -> Result<(Potential<f64>, f64, f64)> {
    let mat = DMatrix::from_fn(rows.len(), m as usize + 1, |r, c| {
        let (k, weight, _) = rows[r];
        weight * radial_moment(a, b, k, c as u32, m - c as u32)
    });
    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.2));
    let sol = solve_equilibrated(&mat, &rhs)?;
    let mut image = Potential::zero(2);
    for c in 0..=m {
        image.add_term(&[2 * c, 2 * (m - c)], sol.solution[c as usize]);
    }
    Ok((a0_invert(&image)?, sol.residual, sol.condition_number))
}

/// Origin value and ordered quadratic coefficients `a < b`, rejecting
/// `a = b`.
fn quadratic_frame(oracle: &dyn InvariantOracle) -> Result<(f64, f64, f64, f64)> {
    if oracle.dim() != 2 {
        return Err(Error::UnsupportedDimension(oracle.dim()));
    }
    let v0 = recover_origin_value(oracle)?;
    let hess = recover_hessian(oracle)?;
    let Recovered::Multiset { values } = &hess.recovered else {
        unreachable!("hessian returns a multiset")
    };
    let (a, b) = (values[0], values[1]);
    let gap = (b - a) / a.abs().max(b.abs()).max(1.0);
    Ok((v0, a, b, gap))
}

/// Recovers an even potential of degree `<= degree` in the frame where its
/// quadratic part is `a x_1^2 + b x_2^2`, `a < b`.
///
/// At homogeneous degree `2m`, the `mu^{-(2+k+m)}` coefficient of the first
/// invariant with `phi = (s - V(0))^{k+1}` equals the contribution of the
/// already recovered terms plus `(k+1) int e^{-H_0} q^k W_{2m}^ave`, which
/// only sees `A_0 W_{2m}`. Rows `k = 0..=m+1` determine it when `a != b`.
pub fn recover_analytic_2d(oracle: &dyn InvariantOracle, degree: u32) -> Result<RecoveryReport> {
    let (v0, a, b, gap) = quadratic_frame(oracle)?;
    let mut v = Potential::constant(2, v0);
    v.add_term(&[2, 0], a);
    v.add_term(&[0, 2], b);
    if degree >= 4 && gap < DEGENERACY_TOL {
        return Err(Error::RankDeficient(gap));
    }
    let mut report = RecoveryReport::new(Recovered::SingularValue { value: 0.0 });
    let mut worst = 0.0f64;
    for m in 2..=degree / 2 {
        let mut rows = Vec::new();
        for k in 0..=m + 1 {
            let phi = shifted_power(v0, k + 1);
            let p = -(2 + (k + m) as i32);
            let data = oracle.first_expansion(&phi, p, p)?.coefficient(p);
            let known = homogeneous_moment(&compose_poly(&phi, &average_poly(&v)), 2 * (k + m));
            rows.push((k, f64::from(k + 1), data - known));
        }
        let (w, res, cond) = solve_homogeneous(a, b, m, &rows)?;
        worst = worst.max(res);
        report = report.condition(&format!("degree_{}", 2 * m), cond);
        v = v.add(&w)?;
    }
    report.recovered = Recovered::Potential { potential: v };
    Ok(report
        .residual("least_squares", worst)
        .residual("quadratic_gap", gap)
        .flags(AmbiguityFlags {
            rotation: true,
            ..AmbiguityFlags::default()
        }))
}

/// Recovers `V_0..=V_orders` of a semiclassical family with even `V_k` of
/// degree `<= degree`; `V_0` as in [`recover_analytic_2d`].
///
/// For `k >= 1`, the `mu^{-(2+l+m)}` coefficient of
/// `int e^{-mu H_0} (V_0^ave - V_0(0))^l V_k^ave` isolates
/// `int e^{-H_0} q^l [V_k]_{2m}^ave` once lower degrees are known; the
/// shifted powers are recombined from the unshifted oracle data.
pub fn recover_semiclassical_2d(
    oracle: &dyn InvariantOracle,
    degree: u32,
    orders: usize,
) -> Result<RecoveryReport> {
    let base = recover_analytic_2d(oracle, degree)?;
    let Recovered::Potential { potential: v_0 } = &base.recovered else {
        unreachable!("analytic recovery returns a potential")
    };
    let (v0, a, b) = (v_0.coeff(&[0, 0]), v_0.coeff(&[2, 0]), v_0.coeff(&[0, 2]));
    let avg0 = average_poly(v_0);
    let mut report = RecoveryReport::new(Recovered::SingularValue { value: 0.0 });
    for (key, val) in &base.condition_numbers {
        report = report.condition(key, *val);
    }
    let mut worst = base.residuals.get("least_squares").copied().unwrap_or(0.0);
    let mut out = vec![v_0.clone()];
    for k in 1..=orders {
        let mut vk = Potential::zero(2);
        for m in 0..=degree / 2 {
            let mut rows = Vec::new();
            for l in 0..=m + 1 {
                let p = -(2 + (l + m) as i32);
                let mut data = 0.0;
                for t in 0..=l {
                    let c = oracle.semiclassical_expansion(t, k, p, p)?.coefficient(p);
                    data += binomial(l, t) * (-v0).powi((l - t) as i32) * c;
                }
                let shifted = compose_poly(&shifted_power(v0, l), &avg0);
                let known = homogeneous_moment(&(&shifted * &average_poly(&vk)), 2 * (l + m));
                rows.push((l, 1.0, data - known));
            }
            let (w, res, cond) = solve_homogeneous(a, b, m, &rows)?;
            worst = worst.max(res);
            report = report.condition(&format!("order_{k}_degree_{}", 2 * m), cond);
            vk = vk.add(&w)?;
        }
        out.push(vk);
    }
    report.recovered = Recovered::Semiclassical { orders: out };
    Ok(report
        .residual("least_squares", worst)
        .flags(AmbiguityFlags {
            rotation: true,
            odd_part: true,
            ..AmbiguityFlags::default()
        }))
}

//! Quadratic part of a potential at the origin, up to rotation.

use nalgebra::DMatrix;

use super::oracle::InvariantOracle;
use super::report::{AmbiguityFlags, Recovered, RecoveryReport};
use crate::error::{Error, Result};
use crate::invariants::PolyFn;
use crate::scalar::binomial;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `V(0)` from the leading `mu^{-n}` coefficient of the first invariant.
pub fn recover_origin_value(oracle: &dyn InvariantOracle) -> Result<f64> {
    let n = oracle.dim() as i32;
    let s = oracle.first_expansion(&PolyFn::identity(), -n, -n)?;
    Ok(s.coefficient(-n) / (2.0 * std::f64::consts::PI).powi(n))
}

/// Moments `E[(sum a_i Y_i)^k]`, `Y_i ~ Exp(1)`, `k = 1..=count`, read from
/// the `mu^{-(n+k)}` coefficients of `(V^ave - V(0))^k`.
pub fn quadratic_moments(oracle: &dyn InvariantOracle, v0: f64, count: usize) -> Result<Vec<f64>> {
    let n = oracle.dim() as i32;
    let norm = (2.0 * std::f64::consts::PI).powi(n);
    (1..=count as i32)
        .map(|k| {
            let mut phi = PolyFn(vec![1.0]);
            for _ in 0..k {
                phi = compose_linear(&phi, -v0);
            }
            let s = oracle.first_expansion(&phi, -n - k, -n - k)?;
            Ok(s.coefficient(-n - k) / norm)
        })
        .collect()
}

// `phi(s) * (s + c)`
fn compose_linear(phi: &PolyFn, c: f64) -> PolyFn {
    let mut out = vec![0.0; phi.0.len() + 1];
    for (i, a) in phi.0.iter().enumerate() {
        out[i] += a * c;
        out[i + 1] += a;
    }
    PolyFn(out)
}

/// Power sums `sum a_i^j` from moments of `sum a_i Y_i`.
pub fn power_sums_from_moments(m: &[f64]) -> Vec<f64> {
    let mut kappa: Vec<f64> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let mut k = m[n - 1];
        for j in 1..n {
            k -= binomial(n as u32 - 1, j as u32 - 1) * kappa[j - 1] * m[n - j - 1];
        }
        kappa.push(k);
    }
    kappa
        .iter()
        .enumerate()
        .map(|(j, k)| k / factorial(j))
        .collect()
}

/// Roots of `prod (t - a_i)` given the power sums (Newton identities and the
/// companion matrix), ascending.
pub fn roots_from_power_sums(p: &[f64]) -> Result<Vec<f64>> {
    let n = p.len();
    let mut e = vec![1.0];
    for k in 1..=n {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * p[i - 1];
        }
        e.push(s / k as f64);
    }
    // t^n - e1 t^{n-1} + e2 t^{n-2} - ...
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            let k = j + 1;
            if k % 2 == 1 {
                e[k]
            } else {
                -e[k]
            }
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let scale = p.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let mut roots = Vec::with_capacity(n);
    // coincident roots split into a pair of size sqrt(eps)
    for z in companion.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-6 * scale {
            return Err(Error::Genericity(format!(
                "moments are inconsistent with a real quadratic form ({z})"
            )));
        }
        roots.push(z.re);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Eigenvalues `a_i` of the quadratic part `sum a_i x_i^2` (in its principal
/// frame) of `V`.
///
/// One extra moment is predicted from the recovered values and compared
/// with the data. Nearly equal values show up as a large
/// `root_separation` condition number, which is reported, not rejected.
pub fn recover_hessian(oracle: &dyn InvariantOracle) -> Result<RecoveryReport> {
    let n = oracle.dim();
    let v0 = recover_origin_value(oracle)?;
    let m = quadratic_moments(oracle, v0, n + 1)?;
    let p = power_sums_from_moments(&m);
    let roots = roots_from_power_sums(&p[..n])?;
    let spread = roots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let cond = roots.iter().fold(1.0f64, |a, b| a.max(b.abs())) / spread.max(f64::MIN_POSITIVE);
    let predicted: f64 = roots.iter().map(|a| a.powi(n as i32 + 1)).sum();
    let residual = (predicted - p[n]).abs() / p[n].abs().max(1.0);
    Ok(RecoveryReport::new(Recovered::Multiset { values: roots })
        .residual("extra_moment", residual)
        .condition("root_separation", if n > 1 { cond } else { 1.0 })
        .flags(AmbiguityFlags {
            rotation: n > 1,
            ..AmbiguityFlags::default()
        }))
}

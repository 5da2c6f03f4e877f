//! Odd one-dimensional potentials from the odd band invariant.

use std::f64::consts::PI;

use super::oracle::InvariantOracle;
use super::report::{AmbiguityFlags, Recovered, RecoveryReport};
use crate::error::{Error, Result};
use crate::invariants::odd_kernel_integral;

/// `kappa(k, l)`: coefficient of `a_k a_l mu^{-(k+l)/2}` in the odd invariant
/// of `sum a_k x^k`.
pub fn odd_pair_coefficient(k: u32, l: u32) -> Result<f64> {
    Ok(odd_kernel_integral(k, l, 0.5)? * 2f64.powi(-((k + l) as i32)) / PI)
}

/// Recovers `a_1, a_3, ..., a_degree` (up to a global sign) from the
/// coefficients `C_m` of `mu^{-m}`, `m = 1..=degree`.
///
/// The lowest nonzero `C_m` fixes the leading coefficient `a_m`; each later
/// `C_{(m+l)/2}` is linear in `a_l` once the lower coefficients are known.
/// The remaining `C_m` give the residual.
pub fn recover_odd_from_moments(c: &[f64], degree: u32, tol: f64) -> Result<RecoveryReport> {
    if degree % 2 == 0 || c.len() != degree as usize {
        return Err(Error::InvalidArgument(format!(
            "need odd degree and {degree} moments, got {}",
            c.len()
        )));
    }
    let cm = |m: u32| c[m as usize - 1];
    let scale = c
        .iter()
        .fold(0.0f64, |a, b| a.max(b.abs()))
        .max(f64::MIN_POSITIVE);
    let mut a = vec![0.0; degree as usize + 1];
    let Some(lead) = (1..=degree)
        .step_by(2)
        .find(|&m| cm(m).abs() > tol * scale.max(1.0))
    else {
        let report = RecoveryReport::new(Recovered::OddCoefficients {
            coefficients: vec![0.0; (degree as usize + 1) / 2],
        });
        return Ok(report.residual("moments", scale));
    };
    if (1..lead).any(|m| cm(m).abs() > tol * scale.max(1.0)) {
        return Err(Error::Genericity(format!(
            "moment below degree {lead} is nonzero without a matching coefficient"
        )));
    }
    let ratio = cm(lead) / odd_pair_coefficient(lead, lead)?;
    if ratio < 0.0 {
        return Err(Error::Genericity(
            "leading moment has the wrong sign for a real potential".into(),
        ));
    }
    a[lead as usize] = ratio.sqrt();
    // contribution of known coefficients to C_m
    let known = |a: &[f64], m: u32| -> Result<f64> {
        let mut s = 0.0;
        for i in (1..=degree).step_by(2) {
            let j = 2 * m as i64 - i as i64;
            if j < 1 || j > degree as i64 || a[i as usize] == 0.0 || a[j as usize] == 0.0 {
                continue;
            }
            s += a[i as usize] * a[j as usize] * odd_pair_coefficient(i, j as u32)?;
        }
        Ok(s)
    };
    let mut cond = 1.0f64;
    for l in (lead + 2..=degree).step_by(2) {
        let m = (lead + l) / 2;
        let pivot =
            (odd_pair_coefficient(lead, l)? + odd_pair_coefficient(l, lead)?) * a[lead as usize];
        if pivot == 0.0 {
            return Err(Error::RankDeficient(0.0));
        }
        cond = cond.max(cm(m).abs().max(1.0) / pivot.abs());
        a[l as usize] = (cm(m) - known(&a, m)?) / pivot;
    }
    let mut residual = 0.0f64;
    for m in 1..=degree {
        residual = residual.max((cm(m) - known(&a, m)?).abs());
    }
    if residual > 10.0 * tol * scale.max(1.0) {
        return Err(Error::Residual {
            residual,
            tolerance: 10.0 * tol,
            context: "odd expansion inconsistent".into(),
        });
    }
    let coefficients: Vec<f64> = (1..=degree).step_by(2).map(|k| a[k as usize]).collect();
    Ok(
        RecoveryReport::new(Recovered::OddCoefficients { coefficients })
            .residual("moments", residual)
            .condition("triangular", cond)
            .flags(AmbiguityFlags {
                sign: true,
                ..AmbiguityFlags::default()
            }),
    )
}

/// Odd recovery from an oracle's odd-invariant expansion.
pub fn recover_odd_1d(oracle: &dyn InvariantOracle, degree: u32) -> Result<RecoveryReport> {
    if oracle.dim() != 1 {
        return Err(Error::UnsupportedDimension(oracle.dim()));
    }
    let d = degree as i32;
    let series = oracle.odd_expansion(-d, -1)?;
    let c: Vec<f64> = (1..=d).map(|m| series.coefficient(-m)).collect();
    recover_odd_from_moments(&c, degree, oracle.tolerance())
        .map(|r| r.condition("laurent_fit", series.condition_number))
}

//! Gradient norm at the origin for potentials without quadratic and quartic
//! terms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::hessian::recover_origin_value;
use super::odd1d::odd_pair_coefficient;
use super::oracle::InvariantOracle;
use super::report::{Recovered, RecoveryReport};
use crate::error::{Error, Result};
use crate::invariants::PolyFn;

/// Outcome of the membership test `V_2 = 0` and `V_4 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassCheck {
    /// `int e^{-H_0} (V_2^ave)^2`.
    pub quadratic_mass: f64,
    /// `int e^{-H_0} (V_4^ave)^2`, meaningful when the quadratic mass vanishes.
    pub quartic_mass: f64,
    pub admissible: bool,
}

/// Decides from first-invariant data whether `V_2 = V_4 = 0`.
///
/// `(V^ave - V(0))^2` has lowest homogeneous part `(V_2^ave)^2`, and
/// `(V_4^ave)^2` once `V_2` vanishes; averaging is injective on even
/// polynomials, so both masses vanish exactly on the class.
pub fn check_linear_class(oracle: &dyn InvariantOracle) -> Result<ClassCheck> {
    let n = oracle.dim() as i32;
    let v0 = recover_origin_value(oracle)?;
    let phi = PolyFn(vec![v0 * v0, -2.0 * v0, 1.0]);
    let s = oracle.first_expansion(&phi, -n - 4, -n)?;
    let norm = (2.0 * PI).powi(n);
    let quadratic_mass = s.coefficient(-n - 2) / norm;
    let quartic_mass = s.coefficient(-n - 4) / norm;
    let tol = 10.0 * oracle.tolerance() * (1.0 + v0 * v0);
    Ok(ClassCheck {
        quadratic_mass,
        quartic_mass,
        admissible: quadratic_mass.abs() <= tol && quartic_mass.abs() <= tol,
    })
}

/// `|grad V(0)|^2` from the `mu^{-n}` coefficient of the second invariant
/// (`l = 0`), which is `kappa(1,1) (2 pi)^{n-1} |grad V(0)|^2` on the class.
pub fn recover_linear_norm(oracle: &dyn InvariantOracle) -> Result<RecoveryReport> {
    let class = check_linear_class(oracle)?;
    if !class.admissible {
        return Err(Error::Genericity(format!(
            "potential has quadratic or quartic terms (masses {:e}, {:e})",
            class.quadratic_mass, class.quartic_mass
        )));
    }
    let n = oracle.dim() as i32;
    let s = oracle.second_expansion(0, -n, -n)?;
    let kernel = odd_pair_coefficient(1, 1)? * (2.0 * PI).powi(n - 1);
    let value = s.coefficient(-n) / kernel;
    Ok(RecoveryReport::new(Recovered::Norm { value })
        .residual("quadratic_mass", class.quadratic_mass.abs())
        .residual("quartic_mass", class.quartic_mass.abs())
        .condition("laurent_fit", s.condition_number))
}

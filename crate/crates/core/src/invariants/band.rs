//! Band invariants as phase-space integrals.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gaussian::gaussian_phase_integral;
use super::quadrature::composite_rule;
use super::sphere::{compose_poly, sphere_average_poly};
use super::weight::{PolyFn, WeightSpec};
use crate::averaging::average::double_integral;
use crate::averaging::{average_poly, delta_average, Potential, SemiclassicalPotential};
use crate::error::{Error, Result};
use crate::scalar::factorial;
use crate::symbolcalc::{
    frequency_components, moyal_power_expansion, moyal_term, poisson_bracket, ExpPolySymbol,
    PhasePolynomial, Symbol,
};

/// `int f(H_0) g dx dp` for a phase polynomial `g`.
///
/// Gaussian weights are integrated in closed form. Bump weights use the
/// radial formula `(2pi)^n int f(E) <g>_E E^{n-1}/(n-1)! dE`, which needs
/// `g` invariant under the flow.
pub fn weighted_integral(g: &PhasePolynomial<f64>, weight: &WeightSpec) -> Result<f64> {
    weight.validate()?;
    match *weight {
        WeightSpec::Gaussian { mu } => Ok(gaussian_phase_integral(g, mu / 2.0).re),
        WeightSpec::Bump { .. } => {
            radial_integral(g.dim(), weight, |e| Ok(sphere_average_poly(g, e)))
        }
    }
}

/// `(2pi)^n int_0^inf f(E) S(E) E^{n-1}/(n-1)! dE` by composite Gauss-Legendre.
pub fn radial_integral(
    dim: usize,
    weight: &WeightSpec,
    s: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let a = weight.support_start();
    let b = weight.support_end(1e-18);
    let norm = (2.0 * PI).powi(dim as i32) / factorial(dim as u32 - 1);
    let integrate = |panels: usize| -> Result<f64> {
        let mut acc = 0.0;
        for (e, w) in composite_rule(a, b, panels, 16) {
            if e <= 0.0 {
                continue;
            }
            acc += w * weight.eval(e) * s(e)? * e.powi(dim as i32 - 1);
        }
        Ok(norm * acc)
    };
    let mut panels = 8;
    let mut prev = integrate(panels)?;
    for _ in 0..8 {
        panels *= 2;
        let next = integrate(panels)?;
        if !next.is_finite() {
            return Err(Error::NonFinite("radial integrand diverges".into()));
        }
        if (next - prev).abs() <= 1e-11 * next.abs().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature((integrate(panels)? - prev).abs()))
}

/// `int f(H_0) phi(V^ave) dx dp`.
pub fn band_invariant_first(v: &Potential<f64>, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
    weighted_integral(&compose_poly(phi, &average_poly(v)), weight)
}

/// Same quantity for an arbitrary `phi`, by radial and sphere quadrature.
pub fn band_invariant_first_numeric(
    v: &Potential<f64>,
    weight: &WeightSpec,
    phi: impl Fn(f64) -> f64,
    quad_nodes: usize,
) -> Result<f64> {
    weight.validate()?;
    let ave = average_poly(v);
    radial_integral(v.dim(), weight, |e| {
        super::sphere::sphere_average_invariant(&ave, e, &phi, quad_nodes)
    })
}

/// The function multiplying `f'(H_0) (V^ave)^{l+1}` in the second invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyShift {
    /// `V - V^ave`: the weight is evaluated at the unperturbed cluster energies.
    Difference,
    /// `V + V^ave`.
    Sum,
}

/// Integrand of the second invariant for `f = e^{-mu s}`, written as
/// `e^{-mu H_0} sum_a mu^a T_a` and returned as `(a, T_a)` pairs.
fn second_invariant_pieces(
    v: &Potential<f64>,
    l: u32,
    shift: EnergyShift,
) -> Result<Vec<(i32, PhasePolynomial<f64>)>> {
    let n = v.dim();
    let vp = v.to_phase();
    let ave = average_poly(v);
    let delta = delta_average(v);
    let (a_l1, bracket_sum) = moyal_power_expansion(&ave, &PhasePolynomial::zero(n), l)?;
    let s2 = match shift {
        EnergyShift::Difference => &vp - &ave,
        EnergyShift::Sum => &vp + &ave,
    };
    // B_2(e^{-mu H_0}, g) e^{mu H_0} = mu P_1 + mu^2 P_2; recovered from mu = 1, 2
    let bracket = |mu: f64| -> Result<PhasePolynomial<f64>> {
        let f = Symbol::Exp(ExpPolySymbol::pure(n, Complex::new(-mu, 0.0)));
        match moyal_term(&f, &Symbol::Poly(a_l1.clone()), 2)? {
            Symbol::Exp(e) => Ok(e.prefactor),
            Symbol::Poly(p) => Ok(p),
        }
    };
    let (b1, b2) = (bracket(1.0)?, bracket(2.0)?);
    let p2 = (&b2 - &b1.scale_real(2.0)).scale_real(0.5);
    let p1 = &b1 - &p2;
    let mut t0 = (&ave.pow(l) * &delta).scale_real(f64::from(l + 1));
    t0 += &bracket_sum;
    // f' s_2 - R(f) with f' = -mu f, R(f) = (n/8) mu^2 f - (H_0/12) mu^3 f
    let t1 = &p1 - &(&a_l1 * &s2);
    let t2 = &p2 - &a_l1.scale_real(n as f64 / 8.0);
    let t3 = (&a_l1 * &PhasePolynomial::h0(n)).scale_real(1.0 / 12.0);
    Ok(vec![(0, t0), (1, t1), (2, t2), (3, t3)])
}

/// Second coefficient of the trace expansion for `phi(s) = s^{l+1}`:
/// `(l+1) int f (V^ave)^l V^Delta + Q^f_l`.
pub fn second_invariant(
    v: &Potential<f64>,
    weight: &WeightSpec,
    l: u32,
    shift: EnergyShift,
) -> Result<f64> {
    weight.validate()?;
    let mu = weight
        .gaussian_rate()
        .ok_or_else(|| Error::Unsupported("second invariant needs a gaussian weight".into()))?;
    let mut total = 0.0;
    for (a, t) in second_invariant_pieces(v, l, shift)? {
        total += mu.powi(a) * gaussian_phase_integral(&t, mu / 2.0).re;
    }
    Ok(total)
}

/// Coefficients `C_p` with `second_invariant(e^{-mu s}) = sum_p C_p mu^p`.
pub fn second_invariant_expansion(
    v: &Potential<f64>,
    l: u32,
    shift: EnergyShift,
) -> Result<BTreeMap<i32, f64>> {
    let n = v.dim() as i32;
    let mut out = BTreeMap::new();
    for (a, t) in second_invariant_pieces(v, l, shift)? {
        for (d, c) in homogeneous_gaussian_moments(&t) {
            *out.entry(a - n - d as i32 / 2).or_insert(0.0) += c;
        }
    }
    out.retain(|_, c| *c != 0.0);
    Ok(out)
}

/// `(d, int e^{-H_0} [P]_d)` over the even homogeneous degrees `d` of `P`;
/// the weight `e^{-mu H_0}` scales the degree-`d` term by `mu^{-n-d/2}`.
pub fn homogeneous_gaussian_moments(p: &PhasePolynomial<f64>) -> Vec<(u32, f64)> {
    let top = p.degree().unwrap_or(0);
    (0..=top)
        .step_by(2)
        .map(|d| (d, gaussian_phase_integral(&p.homogeneous_part(d), 0.5).re))
        .filter(|(_, c)| *c != 0.0)
        .collect()
}

/// `int f(H_0) phi(V^Delta) dx dp` for odd `V`.
pub fn odd_invariant(v: &Potential<f64>, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
    if !v.is_odd() {
        return Err(Error::Parity("odd invariant needs an odd potential".into()));
    }
    weighted_integral(&compose_poly(phi, &delta_average(v)), weight)
}

/// `1/4 int e^{-mu|z|^2} int_0^{2pi} int_0^u {X_s^k, X_u^l} ds du dx dp` with
/// `X_s = e^{is} z + e^{-is} zbar`, `z = x + ip`, in one dimension.
pub fn odd_kernel_integral(k: u32, l: u32, mu: f64) -> Result<f64> {
    if k % 2 == 0 || l % 2 == 0 {
        return Err(Error::Parity(format!(
            "kernel indices must be odd, got ({k}, {l})"
        )));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mu must be positive, got {mu}"
        )));
    }
    // X_s = 2x o phi_{-s}, so its frequency-m component carries e^{-ims}
    let two_x = PhasePolynomial::<f64>::x(1, 0).scale_real(2.0);
    let ck = frequency_components(&two_x.pow(k));
    let cl = frequency_components(&two_x.pow(l));
    let mut acc = PhasePolynomial::zero(1);
    for (&m, pm) in &ck {
        for (&mp, pmp) in &cl {
            let w = double_integral::<f64>(-m, -mp);
            if w.norm() == 0.0 {
                continue;
            }
            acc += &poisson_bracket(pm, pmp)?.scale(w);
        }
    }
    Ok(0.25 * gaussian_phase_integral(&acc, mu).re)
}

/// Leading part `int f(H_0) (V_0^ave)^l V_k^ave dx dp` of the order-`k`
/// invariant of a semiclassical potential.
pub fn semiclassical_invariant(
    vs: &SemiclassicalPotential<f64>,
    weight: &WeightSpec,
    l: u32,
    k: usize,
) -> Result<f64> {
    if k == 0 || k >= vs.orders.len() {
        return Err(Error::InvalidArgument(format!(
            "order {k} outside 1..{}",
            vs.orders.len()
        )));
    }
    let a0 = average_poly(&vs.orders[0]);
    let ak = average_poly(&vs.orders[k]);
    weighted_integral(&(&a0.pow(l) * &ak), weight)
}

/// The lower-order remainder of the order-`k` invariant. Only `k = 1` is
/// available; there the remainder vanishes because `w_1 = V_1^ave`.
pub fn semiclassical_remainder(vs: &SemiclassicalPotential<f64>, k: usize) -> Result<f64> {
    match k {
        1 if vs.orders.len() > 1 => Ok(0.0),
        _ => Err(Error::Unsupported(format!("remainder for order {k}"))),
    }
}

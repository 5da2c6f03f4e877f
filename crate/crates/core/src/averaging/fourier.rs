//! Angular Fourier decomposition of averages of even two-dimensional potentials.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::potential::Potential;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Real};
use crate::symbolcalc::PhasePolynomial;

/// `gamma_{k,r} = 4^{-k} C(2k, k + r)`, zero for `|r| > k`.
pub fn gamma_coeff(k: u32, r: i32) -> f64 {
    let kr = i64::from(k) + i64::from(r);
    if kr < 0 || kr > 2 * i64::from(k) {
        return 0.0;
    }
    binomial(2 * k, kr as u32) * 0.25f64.powi(k as i32)
}

/// Leading large-`k` behaviour `1/sqrt(pi k)` of `gamma_{k,r}`.
pub fn gamma_asymptotic(k: u32, _r: i32) -> f64 {
    1.0 / (std::f64::consts::PI * f64::from(k)).sqrt()
}

fn require_even<T: Real>(f: &Potential<T>) -> Result<()> {
    if !f.is_even() {
        return Err(Error::Parity(
            "expected a polynomial even in each variable".into(),
        ));
    }
    Ok(())
}

/// `B_r: x^{2k} -> gamma_{k,r} x^{2k}`.
pub fn b_r_apply<T: Real>(f: &Potential<T>, r: i32) -> Result<Potential<T>> {
    if f.dim() != 1 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    require_even(f)?;
    let mut out = Potential::zero(1);
    for (a, c) in f.terms() {
        out.add_term(a, c * T::lit(gamma_coeff(a[0] / 2, r)));
    }
    Ok(out)
}

/// Angular components `A_r V` of `V^ave` for even `V` in two dimensions.
///
/// At `z_j = rho_j e^{i theta_j}` the average is
/// `sum_r (A_r V)(rho_1, rho_2) e^{2ir(theta_1 - theta_2)}`, and on
/// `x_1^{2k} x_2^{2l}` the component is `gamma_{k,r} gamma_{l,r} x_1^{2k} x_2^{2l}`.
pub type FourierComponentMap<T> = BTreeMap<i32, PhasePolynomial<T>>;

pub fn r_n_decompose<T: Real>(v: &Potential<T>) -> Result<FourierComponentMap<T>> {
    if v.dim() != 2 {
        return Err(Error::UnsupportedDimension(v.dim()));
    }
    require_even(v)?;
    let mut out: FourierComponentMap<T> = BTreeMap::new();
    for (a, c) in v.terms() {
        let (k, l) = (a[0] / 2, a[1] / 2);
        let rmax = k.min(l) as i32;
        for r in -rmax..=rmax {
            let g = gamma_coeff(k, r) * gamma_coeff(l, r);
            let term =
                PhasePolynomial::monomial(2, a, &[0, 0], Complex::new(c * T::lit(g), T::zero()));
            *out.entry(r).or_insert_with(|| PhasePolynomial::zero(2)) += &term;
        }
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// Inverse of `A_0`: the coefficient of `x_1^{2k} x_2^{2l}` is divided by
/// `gamma_{k,0} gamma_{l,0}`.
pub fn a0_invert<T: Real>(g: &Potential<T>) -> Result<Potential<T>> {
    require_even(g)?;
    let mut out = Potential::zero(g.dim());
    for (a, c) in g.terms() {
        let d: f64 = a.iter().map(|&e| gamma_coeff(e / 2, 0)).product();
        out.add_term(a, c / T::lit(d));
    }
    Ok(out)
}

/// `A_0` on even polynomials in any dimension.
pub fn a0_apply<T: Real>(v: &Potential<T>) -> Result<Potential<T>> {
    require_even(v)?;
    let mut out = Potential::zero(v.dim());
    for (a, c) in v.terms() {
        let d: f64 = a.iter().map(|&e| gamma_coeff(e / 2, 0)).product();
        out.add_term(a, c * T::lit(d));
    }
    Ok(out)
}

//! Transport hierarchy `r_k(t)` and the symbol `w = sum hbar^k w_k` of the band
//! operator, assembled from the logarithm of the one-period propagator.

use std::f64::consts::PI;

use num_complex::Complex;

use super::moyal::moyal_poly;
use super::poly::PhasePolynomial;
use super::time::{duhamel, TimeSymbol};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default bound on the transport order.
pub const DEFAULT_MAX_ORDER: usize = 4;

/// Truncated power series in `hbar` with phase-polynomial coefficients.
pub type HbarSeries<T> = Vec<PhasePolynomial<T>>;

/// `(a # b)_k = sum_{i+j+l=k} B_l(a_i, b_j)` for `k <= order`.
pub fn series_moyal<T: Real>(
    a: &HbarSeries<T>,
    b: &HbarSeries<T>,
    order: usize,
) -> Result<HbarSeries<T>> {
    let dim = a.first().or(b.first()).map_or(1, |p| p.dim());
    let mut out = vec![PhasePolynomial::zero(dim); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            for l in 0..=(order - i - j) {
                let term = moyal_poly(ai, bj, l as u32)?;
                out[i + j + l] += &term;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TransportSymbols<T: Real> {
    /// `r_0(t), ..., r_K(t)`.
    pub r: Vec<TimeSymbol<T>>,
    /// `w_0, ..., w_K`.
    pub w: Vec<PhasePolynomial<T>>,
}

/// Solves `r_k' = {H0, r_k} - i sum_{l<k} B_l(V, r_{k-1-l})`, `r_k(0) = 0`
/// (with `r_{-1}` replaced by the constant 1), then expands
/// `w = (i / 2 pi) log(1 + hbar R)/hbar` with `R = sum hbar^k r_k(2 pi)` in
/// the Moyal algebra.
pub fn transport_symbols<T: Real>(
    v: &PhasePolynomial<T>,
    order: usize,
    bound: usize,
) -> Result<TransportSymbols<T>> {
    if order > bound {
        return Err(Error::OrderTooLarge {
            requested: order,
            bound,
        });
    }
    let n = v.dim();
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut r: Vec<TimeSymbol<T>> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let g = if k == 0 {
            TimeSymbol::constant(v.clone())
        } else {
            let mut g = TimeSymbol::zero(n);
            for l in 0..k {
                let term = r[k - 1 - l].try_map(|p| moyal_poly(v, p, l as u32))?;
                g = g.add(&term);
            }
            g
        };
        r.push(duhamel(&g).scale(minus_i));
    }
    let period = T::lit(2.0 * PI);
    let big_r: HbarSeries<T> = r
        .iter()
        .map(|rk| rk.at(period).prune(T::lit(1e-13)))
        .collect();

    // log series: sum_{j>=1} (-1)^{j+1}/j hbar^{j-1} R^{#j}
    let mut w: HbarSeries<T> = vec![PhasePolynomial::zero(n); order + 1];
    let mut power = big_r.clone();
    for j in 1..=order + 1 {
        let coef = T::lit(if j % 2 == 1 { 1.0 } else { -1.0 } / j as f64);
        for (m, pm) in power.iter().enumerate() {
            let k = m + j - 1;
            if k <= order {
                w[k] += &pm.scale_real(coef);
            }
        }
        if j <= order {
            // only orders m <= order + 1 - (j + 1) of the next power are used
            power = series_moyal(&power, &big_r, order - j)?;
        }
    }
    let pref = Complex::new(T::zero(), T::one() / period);
    let w = w
        .into_iter()
        .map(|p| p.scale(pref).prune(T::lit(1e-13)))
        .collect();
    Ok(TransportSymbols { r, w })
}

/// Order-zero and order-`hbar^2` parts of `(w0 + hbar^2 w2)^{#(l+1)}`:
/// `(w0^{l+1}, (l+1) w0^l w2 + sum_{j<l} w0^j B_2(w0, w0^{l-j}))`.
pub fn moyal_power_expansion<T: Real>(
    w0: &PhasePolynomial<T>,
    w2: &PhasePolynomial<T>,
    l: u32,
) -> Result<(PhasePolynomial<T>, PhasePolynomial<T>)> {
    w0.check_dim(w2)?;
    let lead = w0.pow(l + 1);
    let mut second = (&w0.pow(l) * w2).scale_real(T::lit(f64::from(l + 1)));
    for j in 0..l {
        second += &(&w0.pow(j) * &moyal_poly(w0, &w0.pow(l - j), 2)?);
    }
    Ok((lead, second))
}

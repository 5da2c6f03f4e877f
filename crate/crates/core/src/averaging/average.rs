//! Orbit averages `V^ave` and the second-order average `V^Delta`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::Zero;

use super::potential::Potential;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Cx, Real};
use crate::symbolcalc::{compositions, frequency_components, poisson_bracket, PhasePolynomial};

/// Powers of `z_i = x_i + i p_i` and of its conjugate, memoized.
struct ZPowers<T: Real> {
    dim: usize,
    cache: HashMap<(usize, bool, u32), PhasePolynomial<T>>,
}

impl<T: Real> ZPowers<T> {
    fn new(dim: usize) -> Self {
        ZPowers {
            dim,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, i: usize, conj: bool, k: u32) -> PhasePolynomial<T> {
        if let Some(p) = self.cache.get(&(i, conj, k)) {
            return p.clone();
        }
        let p = if k == 0 {
            PhasePolynomial::one(self.dim)
        } else {
            let s = if conj { -T::one() } else { T::one() };
            let z = &PhasePolynomial::x(self.dim, i)
                + &PhasePolynomial::p(self.dim, i).scale(Complex::new(T::zero(), s));
            &self.get(i, conj, k - 1) * &z
        };
        self.cache.insert((i, conj, k), p.clone());
        p
    }
}

/// `V^ave`, term by term: `x^alpha` averages to
/// `2^{-|alpha|} sum_{|j| = |alpha|/2} prod_r C(alpha_r, j_r) z_r^{j_r} zbar_r^{alpha_r - j_r}`.
pub fn average_poly<T: Real>(v: &Potential<T>) -> PhasePolynomial<T> {
    let n = v.dim();
    let mut zp = ZPowers::new(n);
    let mut out = PhasePolynomial::zero(n);
    for (alpha, c) in v.terms() {
        let total: u32 = alpha.iter().sum();
        if total % 2 == 1 {
            continue;
        }
        let scale = c * T::lit(0.5f64.powi(total as i32));
        for j in compositions(n, total / 2) {
            if j.iter().zip(alpha).any(|(jr, ar)| jr > ar) {
                continue;
            }
            let mut term = PhasePolynomial::real_constant(n, scale);
            for r in 0..n {
                let w = binomial(alpha[r], j[r]);
                term = (&(&term * &zp.get(r, false, j[r])) * &zp.get(r, true, alpha[r] - j[r]))
                    .scale_real(T::lit(w));
            }
            out += &term;
        }
    }
    out.prune(T::tiny())
}

/// Orbit average of a general phase-space polynomial symbol.
pub fn average_symbol<T: Real>(a: &PhasePolynomial<T>) -> PhasePolynomial<T> {
    frequency_components(a)
        .remove(&0)
        .unwrap_or_else(|| PhasePolynomial::zero(a.dim()))
}

/// Trapezoid rule for `(1/2pi) int_0^{2pi} V(x cos s + p sin s) ds`.
pub fn average_numeric<T: Real>(
    v: impl Fn(&[T]) -> T,
    x: &[T],
    p: &[T],
    nodes: usize,
) -> Result<T> {
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!(
            "at least 16 nodes required, got {nodes}"
        )));
    }
    if x.len() != p.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: p.len(),
        });
    }
    let mut acc = T::zero();
    let mut point = vec![T::zero(); x.len()];
    for k in 0..nodes {
        let s = T::lit(2.0 * PI * k as f64 / nodes as f64);
        let (sn, cs) = s.sin_cos();
        for (i, pt) in point.iter_mut().enumerate() {
            *pt = x[i] * cs + p[i] * sn;
        }
        let val = v(&point);
        if !val.is_finite() {
            return Err(Error::NonFinite(format!("potential at {:?}", point)));
        }
        acc = acc + val;
    }
    Ok(acc / T::lit(nodes as f64))
}

/// Default node count `2 deg + 8` for polynomial input.
pub fn default_nodes(degree: u32) -> usize {
    (2 * degree as usize + 8).max(16)
}

/// [`average_numeric`] with node doubling until the relative gap drops below `rtol`.
pub fn average_numeric_converged<T: Real>(
    v: impl Fn(&[T]) -> T,
    x: &[T],
    p: &[T],
    start: usize,
    rtol: T,
) -> Result<T> {
    let mut nodes = start.max(16);
    let mut prev = average_numeric(&v, x, p, nodes)?;
    for _ in 0..12 {
        nodes *= 2;
        let next = average_numeric(&v, x, p, nodes)?;
        let gap = (next - prev).abs() / next.abs().max(T::one());
        if gap < rtol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature(f64::NAN))
}

/// `int_0^{2pi} int_0^u e^{ims} e^{im'u} ds du`.
pub(crate) fn double_integral<T: Real>(m: i32, mp: i32) -> Cx<T> {
    let two_pi = T::lit(2.0 * PI);
    let i = Complex::new(T::zero(), T::one());
    if m == 0 {
        if mp == 0 {
            return Complex::new(T::lit(2.0 * PI * PI), T::zero());
        }
        return Complex::new(two_pi, T::zero()) / (i * T::lit(f64::from(mp)));
    }
    let mut num = T::zero();
    if m + mp == 0 {
        num = num + two_pi;
    }
    if mp == 0 {
        num = num - two_pi;
    }
    Complex::new(num, T::zero()) / (i * T::lit(f64::from(m)))
}

/// `V^Delta = -(1/4pi) int_0^{2pi} int_0^u {V o phi_s, V o phi_u} ds du`.
pub fn delta_average<T: Real>(v: &Potential<T>) -> PhasePolynomial<T> {
    delta_average_symbol(&v.to_phase())
}

pub fn delta_average_symbol<T: Real>(a: &PhasePolynomial<T>) -> PhasePolynomial<T> {
    let comps = frequency_components(a);
    let mut out = PhasePolynomial::zero(a.dim());
    for (&m, pm) in &comps {
        for (&mp, pmp) in &comps {
            let w = double_integral::<T>(m, mp);
            if w.is_zero() {
                continue;
            }
            let br = poisson_bracket(pm, pmp).expect("same dimension");
            out += &br.scale(w);
        }
    }
    out.scale_real(T::lit(-1.0 / (4.0 * PI))).prune(T::tiny())
}

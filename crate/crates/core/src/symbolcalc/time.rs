//! Time-dependent symbols `sum t^q e^{imt} P_{q,m}(x, p)` and the harmonic flow.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::moyal::poisson_bracket;
use super::poly::PhasePolynomial;
use crate::error::Result;
use crate::scalar::{Cx, Real};

/// Laurent polynomial in `e^{i sigma}` with phase-polynomial coefficients.
pub type FrequencyMap<T> = BTreeMap<i32, PhasePolynomial<T>>;

fn laurent_mul<T: Real>(a: &FrequencyMap<T>, b: &FrequencyMap<T>, dim: usize) -> FrequencyMap<T> {
    let mut out: FrequencyMap<T> = BTreeMap::new();
    for (ma, pa) in a {
        for (mb, pb) in b {
            let prod = pa * pb;
            *out.entry(ma + mb)
                .or_insert_with(|| PhasePolynomial::zero(dim)) += &prod;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Fourier decomposition of `f o phi_sigma = sum_m e^{i m sigma} F_m`.
///
/// Uses `x -> (x - ip)/2 e^{i sigma} + (x + ip)/2 e^{-i sigma}` and
/// `p -> (p + ix)/2 e^{i sigma} + (p - ix)/2 e^{-i sigma}`.
pub fn frequency_components<T: Real>(f: &PhasePolynomial<T>) -> FrequencyMap<T> {
    let n = f.dim();
    let half = T::lit(0.5);
    let ihalf = Complex::new(T::zero(), half);
    let rhalf = Complex::new(half, T::zero());
    // substitution for each packed slot
    let subs: Vec<FrequencyMap<T>> = (0..2 * n)
        .map(|slot| {
            let (own, other, sign) = if slot < n {
                (
                    PhasePolynomial::x(n, slot),
                    PhasePolynomial::p(n, slot),
                    -T::one(),
                )
            } else {
                (
                    PhasePolynomial::p(n, slot - n),
                    PhasePolynomial::x(n, slot - n),
                    T::one(),
                )
            };
            let mut m = BTreeMap::new();
            m.insert(1, &own.scale(rhalf) + &other.scale(ihalf * sign));
            m.insert(-1, &own.scale(rhalf) - &other.scale(ihalf * sign));
            m
        })
        .collect();
    let mut power_cache: Vec<Vec<FrequencyMap<T>>> = subs
        .iter()
        .map(|_| {
            let mut one = BTreeMap::new();
            one.insert(0, PhasePolynomial::one(n));
            vec![one]
        })
        .collect();
    let mut out: FrequencyMap<T> = BTreeMap::new();
    for (mono, c) in f.terms() {
        let mut acc: FrequencyMap<T> = BTreeMap::new();
        acc.insert(0, PhasePolynomial::constant(n, c));
        for slot in 0..2 * n {
            let e = mono.exp(slot) as usize;
            if e == 0 {
                continue;
            }
            while power_cache[slot].len() <= e {
                let next = laurent_mul(power_cache[slot].last().unwrap(), &subs[slot], n);
                power_cache[slot].push(next);
            }
            acc = laurent_mul(&acc, &power_cache[slot][e], n);
        }
        for (m, p) in acc {
            *out.entry(m).or_insert_with(|| PhasePolynomial::zero(n)) += &p;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// `sum t^q e^{imt} P_{q,m}`, keyed by `(q, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSymbol<T: Real> {
    dim: usize,
    terms: BTreeMap<(u32, i32), PhasePolynomial<T>>,
}

impl<T: Real> TimeSymbol<T> {
    pub fn zero(dim: usize) -> Self {
        TimeSymbol {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The time-independent symbol `p`.
    pub fn constant(p: PhasePolynomial<T>) -> Self {
        let mut s = Self::zero(p.dim());
        s.add_term(0, 0, &p);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i32), &PhasePolynomial<T>)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn term(&self, q: u32, m: i32) -> Option<&PhasePolynomial<T>> {
        self.terms.get(&(q, m))
    }

    pub fn add_term(&mut self, q: u32, m: i32, p: &PhasePolynomial<T>) {
        let entry = self
            .terms
            .entry((q, m))
            .or_insert_with(|| PhasePolynomial::zero(p.dim()));
        *entry += p;
        if entry.is_zero() {
            self.terms.remove(&(q, m));
        }
    }

    /// Coefficientwise image under a linear map of phase polynomials.
    pub fn map(&self, f: impl Fn(&PhasePolynomial<T>) -> PhasePolynomial<T>) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(q, m), p) in &self.terms {
            out.add_term(q, m, &f(p));
        }
        out
    }

    pub fn try_map(
        &self,
        f: impl Fn(&PhasePolynomial<T>) -> Result<PhasePolynomial<T>>,
    ) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (&(q, m), p) in &self.terms {
            out.add_term(q, m, &f(p)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(q, m), p) in &other.terms {
            out.add_term(q, m, p);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Cx::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(q1, m1), p1) in &self.terms {
            for (&(q2, m2), p2) in &other.terms {
                out.add_term(q1 + q2, m1 + m2, &(p1 * p2));
            }
        }
        out
    }

    /// Time derivative.
    pub fn dt(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(q, m), p) in &self.terms {
            if q > 0 {
                out.add_term(q - 1, m, &p.scale_real(T::lit(q as f64)));
            }
            if m != 0 {
                out.add_term(q, m, &p.scale(Complex::new(T::zero(), T::lit(m as f64))));
            }
        }
        out
    }

    /// The phase polynomial obtained by fixing the time `t`.
    pub fn at(&self, t: T) -> PhasePolynomial<T> {
        let mut out = PhasePolynomial::zero(self.dim);
        for (&(q, m), p) in &self.terms {
            let phase = Complex::new(T::zero(), T::lit(m as f64) * t).exp() * t.powi(q as i32);
            out += &p.scale(phase);
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.terms
            .values()
            .map(|p| p.max_abs())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.sub(other).max_abs() <= tol
    }
}

/// `f o phi_s` as a time symbol in `s`.
pub fn flow_pullback<T: Real>(f: &PhasePolynomial<T>) -> TimeSymbol<T> {
    let mut out = TimeSymbol::zero(f.dim());
    for (m, p) in frequency_components(f) {
        out.add_term(0, m, &p);
    }
    out
}

/// `int_0^t s^q e^{i w s} ds` as a scalar time series `{(q', m'): c}`.
pub fn power_exp_integral<T: Real>(q: u32, w: i32) -> BTreeMap<(u32, i32), Cx<T>> {
    let mut out = BTreeMap::new();
    if w == 0 {
        out.insert(
            (q + 1, 0),
            Complex::new(T::one() / T::lit((q + 1) as f64), T::zero()),
        );
        return out;
    }
    let inv = Complex::new(T::zero(), T::lit(w as f64)).inv();
    out.insert((0, w), inv);
    out.insert((0, 0), -inv);
    for k in 1..=q {
        let factor = -inv * T::lit(k as f64);
        let mut next: BTreeMap<(u32, i32), Cx<T>> =
            out.iter().map(|(&key, &c)| (key, c * factor)).collect();
        let e = next.entry((k, w)).or_insert_with(Cx::zero);
        *e = *e + inv;
        out = next;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Duhamel integral `int_0^t e^{(t-s)L} g(s) ds` with `L = {H0, .}`.
///
/// On a frequency component `P_k` (`P_k o phi_sigma = e^{ik sigma} P_k`) the
/// propagator acts as `e^{tau L} P_k = e^{-ik tau} P_k`.
pub fn duhamel<T: Real>(g: &TimeSymbol<T>) -> TimeSymbol<T> {
    let n = g.dim();
    let mut out = TimeSymbol::zero(n);
    for ((q, m), p) in g.terms() {
        for (k, pk) in frequency_components(p) {
            for ((q2, m2), c) in power_exp_integral::<T>(q, m + k) {
                out.add_term(q2, m2 - k, &pk.scale(c));
            }
        }
    }
    out
}

/// `{H0, g}` applied to each coefficient.
pub fn h0_bracket<T: Real>(g: &TimeSymbol<T>) -> TimeSymbol<T> {
    let h = PhasePolynomial::h0(g.dim());
    g.map(|p| poisson_bracket(&h, p).expect("dimensions agree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type P = PhasePolynomial<f64>;

    fn rotate(x: f64, p: f64, s: f64) -> (f64, f64) {
        (x * s.cos() + p * s.sin(), p * s.cos() - x * s.sin())
    }

    #[test]
    fn pullback_of_x() {
        let f = flow_pullback(&P::x(1, 0));
        for s in [0.0f64, 0.3, 1.7, 4.0] {
            let want = &P::x(1, 0).scale_real(s.cos()) + &P::p(1, 0).scale_real(s.sin());
            assert!(f.at(s).approx_eq(&want, 1e-14));
        }
    }

    #[test]
    fn pullback_of_x_squared() {
        let x = P::x(1, 0);
        let p = P::p(1, 0);
        let f = flow_pullback(&x.pow(2));
        for s in [0.2f64, 1.1, 2.5] {
            let want = &(&(&x.pow(2) + &p.pow(2)).scale_real(0.5)
                + &(&x.pow(2) - &p.pow(2)).scale_real(0.5 * (2.0 * s).cos()))
                + &(&x * &p).scale_real((2.0 * s).sin());
            assert!(f.at(s).approx_eq(&want, 1e-14));
        }
    }

    #[test]
    fn energy_is_conserved() {
        let f = flow_pullback(&P::h0(2));
        assert_eq!(f.terms().count(), 1);
        assert!(f.term(0, 0).unwrap().approx_eq(&P::h0(2), 1e-15));
    }

    #[test]
    fn pullback_matches_pointwise_rotation() {
        let f = &(&P::x(1, 0).pow(3) + &(&P::x(1, 0) * &P::p(1, 0).pow(2)).scale_real(2.0))
            + &P::p(1, 0);
        let g = flow_pullback(&f);
        for s in [0.4, 2.9] {
            let (xr, pr) = rotate(0.7, -1.3, s);
            let a = g.at(s).eval(&[0.7], &[-1.3]);
            let b = f.eval(&[xr], &[pr]);
            assert!((a - b).norm() < 1e-13);
        }
        assert!(g.at(2.0 * PI).approx_eq(&f, 1e-12));
    }

    #[test]
    fn power_integral_values() {
        for (q, w) in [(0, 0), (2, 0), (0, 3), (1, -2), (3, 1)] {
            let series = power_exp_integral::<f64>(q, w);
            let t: f64 = 1.3;
            let got: Cx<f64> = series
                .iter()
                .map(|(&(a, m), &c)| c * t.powi(a as i32) * Complex::new(0.0, m as f64 * t).exp())
                .sum();
            // midpoint rule oracle
            let nodes = 20000;
            let h = t / nodes as f64;
            let want: Cx<f64> = (0..nodes)
                .map(|i| {
                    let s = (i as f64 + 0.5) * h;
                    Complex::new(0.0, w as f64 * s).exp() * s.powi(q as i32) * h
                })
                .sum();
            assert!((got - want).norm() < 1e-7, "q={q} w={w}");
        }
    }

    #[test]
    fn duhamel_solves_the_transport_equation() {
        let x = P::x(1, 0);
        let v = &x.pow(3) + &(&x * &P::p(1, 0)).scale_real(0.5);
        let mut g = flow_pullback(&v);
        g = g.mul(&TimeSymbol::constant(x.clone()));
        g.add_term(2, 1, &x);
        let r = duhamel(&g);
        let resid = r.dt().sub(&h0_bracket(&r)).sub(&g);
        assert!(resid.max_abs() < 1e-12);
        assert!(r.at(0.0).max_abs() < 1e-12);
    }
}

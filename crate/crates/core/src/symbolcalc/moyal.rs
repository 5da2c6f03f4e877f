//! Poisson brackets and the bidifferential terms of the Weyl (Moyal) product.
//!
//! Conventions: `{f, g} = sum_i d_{x_i} f d_{p_i} g - d_{p_i} f d_{x_i} g`, so
//! `{x, p} = 1`, and the Moyal product is `a # b = sum_j hbar^j B_j(a, b)` with
//! `B_1(a, b) = (i/2) {a, b}`, which quantizes to `[x, p] = i hbar`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::poly::PhasePolynomial;
use crate::error::{Error, Result};
use crate::scalar::{factorial, Cx, Real};

/// All multi-indices in `N^n` with entries summing to `total`.
pub fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(n - 1, total - first) {
            let mut v = Vec::with_capacity(n);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn multi_factorial(alpha: &[u32]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

/// Pairs `(alpha, beta)` with `|alpha| + |beta| = k` and the weight
/// `(-1)^{|alpha|} / (alpha! beta!)`.
fn bracket_terms(n: usize, k: u32) -> Vec<(Vec<u32>, Vec<u32>, f64)> {
    let mut out = Vec::new();
    for ka in 0..=k {
        for alpha in compositions(n, ka) {
            for beta in compositions(n, k - ka) {
                let sign = if ka % 2 == 0 { 1.0 } else { -1.0 };
                let w = sign / (multi_factorial(&alpha) * multi_factorial(&beta));
                out.push((alpha.clone(), beta, w));
            }
        }
    }
    out
}

pub fn poisson_bracket<T: Real>(
    f: &PhasePolynomial<T>,
    g: &PhasePolynomial<T>,
) -> Result<PhasePolynomial<T>> {
    f.check_dim(g)?;
    let mut out = PhasePolynomial::zero(f.dim());
    for i in 0..f.dim() {
        out += &(&f.dx(i) * &g.dp(i));
        out -= &(&f.dp(i) * &g.dx(i));
    }
    Ok(out)
}

/// `{a, b}_k = sum_{|alpha|+|beta|=k} (-1)^{|alpha|}/(alpha! beta!)
/// d_p^beta d_x^alpha a * d_p^alpha d_x^beta b`.
///
/// With the bracket orientation of this module, `{a, b}_1 = -{a, b}`.
pub fn higher_bracket<T: Real>(
    a: &PhasePolynomial<T>,
    b: &PhasePolynomial<T>,
    k: u32,
) -> Result<PhasePolynomial<T>> {
    a.check_dim(b)?;
    let n = a.dim();
    let mut out = PhasePolynomial::zero(n);
    for (alpha, beta, w) in bracket_terms(n, k) {
        let da = a.deriv(&alpha, &beta);
        if da.is_zero() {
            continue;
        }
        let db = b.deriv(&beta, &alpha);
        if db.is_zero() {
            continue;
        }
        out += &(&da * &db).scale_real(T::lit(w));
    }
    Ok(out)
}

/// `(-i/2)^j`, the factor turning the higher bracket into `B_j`.
fn moyal_factor<T: Real>(j: u32) -> Cx<T> {
    let base: Cx<T> = Complex::new(T::zero(), T::lit(-0.5));
    (0..j).fold(Cx::one(), |acc, _| acc * base)
}

/// `B_j(a, b)` for polynomial symbols.
pub fn moyal_poly<T: Real>(
    a: &PhasePolynomial<T>,
    b: &PhasePolynomial<T>,
    j: u32,
) -> Result<PhasePolynomial<T>> {
    Ok(higher_bracket(a, b, j)?.scale(moyal_factor(j)))
}

/// `prefactor * exp(rate * H0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolySymbol<T: Real> {
    pub prefactor: PhasePolynomial<T>,
    pub rate: Cx<T>,
}

impl<T: Real> ExpPolySymbol<T> {
    pub fn new(prefactor: PhasePolynomial<T>, rate: Cx<T>) -> Self {
        ExpPolySymbol { prefactor, rate }
    }

    /// `exp(rate * H0)` itself.
    pub fn pure(dim: usize, rate: Cx<T>) -> Self {
        Self::new(PhasePolynomial::one(dim), rate)
    }

    pub fn dim(&self) -> usize {
        self.prefactor.dim()
    }

    /// Derivative in a packed slot: `d(P e^{tau H0}) = (dP + tau v P) e^{tau H0}`
    /// where `v` is the slot variable.
    pub fn deriv_slot(&self, slot: usize) -> Self {
        let n = self.dim();
        let var = if slot < n {
            PhasePolynomial::x(n, slot)
        } else {
            PhasePolynomial::p(n, slot - n)
        };
        let mut pre = self.prefactor.deriv_slot(slot);
        pre += &(&var * &self.prefactor).scale(self.rate);
        Self::new(pre, self.rate)
    }

    pub fn deriv(&self, alpha: &[u32], beta: &[u32]) -> Self {
        let n = self.dim();
        let mut out = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                out = out.deriv_slot(i);
            }
        }
        for (i, &k) in beta.iter().enumerate() {
            for _ in 0..k {
                out = out.deriv_slot(n + i);
            }
        }
        out
    }

    pub fn eval(&self, x: &[T], p: &[T]) -> Cx<T> {
        let h: T = x.iter().chain(p).map(|v| *v * *v).sum::<T>() * T::lit(0.5);
        self.prefactor.eval(x, p) * (self.rate * h).exp()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.rate - other.rate).norm() <= tol && self.prefactor.approx_eq(&other.prefactor, tol)
    }
}

/// Either a plain polynomial or a polynomial times `exp(rate * H0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol<T: Real> {
    Poly(PhasePolynomial<T>),
    Exp(ExpPolySymbol<T>),
}

impl<T: Real> Symbol<T> {
    fn as_exp(&self) -> ExpPolySymbol<T> {
        match self {
            Symbol::Poly(p) => ExpPolySymbol::new(p.clone(), Cx::zero()),
            Symbol::Exp(e) => e.clone(),
        }
    }

    fn is_exp(&self) -> bool {
        matches!(self, Symbol::Exp(_))
    }

    pub fn dim(&self) -> usize {
        match self {
            Symbol::Poly(p) => p.dim(),
            Symbol::Exp(e) => e.dim(),
        }
    }
}

impl<T: Real> From<PhasePolynomial<T>> for Symbol<T> {
    fn from(p: PhasePolynomial<T>) -> Self {
        Symbol::Poly(p)
    }
}

impl<T: Real> From<ExpPolySymbol<T>> for Symbol<T> {
    fn from(e: ExpPolySymbol<T>) -> Self {
        Symbol::Exp(e)
    }
}

/// `B_j(a, b)`, the `hbar^j` coefficient of the Moyal product, for
/// polynomial or exponential-type symbols.
pub fn moyal_term<T: Real>(a: &Symbol<T>, b: &Symbol<T>, j: u32) -> Result<Symbol<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if let (Symbol::Poly(pa), Symbol::Poly(pb)) = (a, b) {
        return Ok(Symbol::Poly(moyal_poly(pa, pb, j)?));
    }
    if a.is_exp() && b.is_exp() && a.as_exp().rate != b.as_exp().rate {
        return Err(Error::RateMismatch);
    }
    let (ea, eb) = (a.as_exp(), b.as_exp());
    let n = a.dim();
    let mut pre = PhasePolynomial::zero(n);
    for (alpha, beta, w) in bracket_terms(n, j) {
        let da = ea.deriv(&alpha, &beta);
        let db = eb.deriv(&beta, &alpha);
        pre += &(&da.prefactor * &db.prefactor).scale_real(T::lit(w));
    }
    Ok(Symbol::Exp(ExpPolySymbol::new(
        pre.scale(moyal_factor(j)),
        ea.rate + eb.rate,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = PhasePolynomial<f64>;

    #[test]
    fn canonical_pair() {
        let x = P::x(1, 0);
        let p = P::p(1, 0);
        assert_eq!(poisson_bracket(&x, &p).unwrap(), P::one(1));
        let h = P::h0(2);
        assert!(poisson_bracket(&h, &h).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_squares() {
        // {x^2, p^2} = 2x * 2p = 4xp
        let x2 = P::x(1, 0).pow(2);
        let p2 = P::p(1, 0).pow(2);
        let b = poisson_bracket(&x2, &p2).unwrap();
        assert_eq!(b, P::monomial(1, &[1], &[1], Complex::new(4.0, 0.0)));
        // only alpha = (2) survives: 1/2 * 2 * 2
        let k2 = higher_bracket(&x2, &p2, 2).unwrap();
        assert_eq!(k2, P::real_constant(1, 2.0));
        // B_2 = (-i/2)^2 * 2 = -1/2
        let b2 = moyal_poly(&x2, &p2, 2).unwrap();
        assert!(b2.approx_eq(&P::real_constant(1, -0.5), 1e-14));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(poisson_bracket(&P::x(1, 0), &P::x(2, 0)).is_err());
    }

    #[test]
    fn commutator_orientation() {
        let x: Symbol<f64> = P::x(1, 0).into();
        let p: Symbol<f64> = P::p(1, 0).into();
        let (Symbol::Poly(a), Symbol::Poly(b)) = (
            moyal_term(&x, &p, 1).unwrap(),
            moyal_term(&p, &x, 1).unwrap(),
        ) else {
            panic!()
        };
        let comm = &a - &b;
        assert_eq!(comm, P::constant(1, Complex::new(0.0, 1.0)));
    }

    #[test]
    fn different_rates_rejected() {
        let a: Symbol<f64> = ExpPolySymbol::pure(1, Complex::new(0.0, 1.0)).into();
        let b: Symbol<f64> = ExpPolySymbol::pure(1, Complex::new(0.0, 2.0)).into();
        assert_eq!(moyal_term(&a, &b, 1), Err(Error::RateMismatch));
    }

    #[test]
    fn second_term_against_propagator() {
        // B_2(H0, e^{itH0}) = 1/4 (t^2 H0 - i n t) e^{itH0}
        for n in 1..=3 {
            let t = 0.7;
            let rate = Complex::new(0.0, t);
            let h: Symbol<f64> = P::h0(n).into();
            let e: Symbol<f64> = ExpPolySymbol::pure(n, rate).into();
            let Symbol::Exp(got) = moyal_term(&h, &e, 2).unwrap() else {
                panic!()
            };
            let want = (&P::h0(n).scale_real(t * t * 0.25))
                + &P::constant(n, Complex::new(0.0, -0.25 * n as f64 * t));
            assert!(got.approx_eq(&ExpPolySymbol::new(want, rate), 1e-12));
        }
    }
}

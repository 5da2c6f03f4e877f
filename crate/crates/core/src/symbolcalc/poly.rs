//! Sparse polynomials on phase space `R^{2n}` with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Largest phase-space dimension `n` (so `2n` packed exponent slots).
pub const MAX_DIM: usize = 4;

/// Exponent vector `(alpha, beta)` packed one byte per variable: slots
/// `0..n` hold the `x` exponents and slots `n..2n` the `p` exponents.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn exp(self, slot: usize) -> u32 {
        ((self.0 >> (8 * slot)) & 0xff) as u32
    }

    pub fn with_exp(self, slot: usize, e: u32) -> Mono {
        assert!(e < 256, "exponent overflow");
        let mask = !(0xffu64 << (8 * slot));
        Mono((self.0 & mask) | (u64::from(e) << (8 * slot)))
    }

    pub fn from_parts(ax: &[u32], ap: &[u32]) -> Mono {
        let n = ax.len();
        let mut m = Mono::ONE;
        for (i, &e) in ax.iter().enumerate() {
            m = m.with_exp(i, e);
        }
        for (i, &e) in ap.iter().enumerate() {
            m = m.with_exp(n + i, e);
        }
        m
    }

    pub fn degree(self) -> u32 {
        (0..2 * MAX_DIM).map(|s| self.exp(s)).sum()
    }

    pub fn x_exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn p_exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(n + i)).collect()
    }

    /// Product of monomials; exponents add slotwise.
    pub fn times(self, other: Mono) -> Mono {
        debug_assert!((0..2 * MAX_DIM).all(|s| self.exp(s) + other.exp(s) < 256));
        Mono(self.0 + other.0)
    }
}

/// A polynomial `sum c_{a,b} x^a p^b` on `R^{2n}` with complex coefficients.
///
/// Zero coefficients are never stored, so two values compare equal exactly
/// when their coefficient maps agree.
#[derive(Clone, PartialEq)]
pub struct PhasePolynomial<T: Real> {
    dim: usize,
    terms: BTreeMap<Mono, Cx<T>>,
}

impl<T: Real> PhasePolynomial<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(
            dim >= 1 && dim <= MAX_DIM,
            "phase dimension must be in 1..={MAX_DIM}"
        );
        PhasePolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Cx<T>) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Mono::ONE, c);
        p
    }

    pub fn real_constant(dim: usize, c: T) -> Self {
        Self::constant(dim, Complex::new(c, T::zero()))
    }

    pub fn one(dim: usize) -> Self {
        Self::real_constant(dim, T::one())
    }

    /// The coordinate function `x_i`.
    pub fn x(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut p = Self::zero(dim);
        p.add_term(Mono::ONE.with_exp(i, 1), Cx::one());
        p
    }

    /// The momentum function `p_i`.
    pub fn p(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut p = Self::zero(dim);
        p.add_term(Mono::ONE.with_exp(dim + i, 1), Cx::one());
        p
    }

    pub fn monomial(dim: usize, ax: &[u32], ap: &[u32], c: Cx<T>) -> Self {
        assert_eq!(ax.len(), dim);
        assert_eq!(ap.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(Mono::from_parts(ax, ap), c);
        p
    }

    /// `H0 = (|x|^2 + |p|^2) / 2`.
    pub fn h0(dim: usize) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        let mut p = Self::zero(dim);
        for i in 0..dim {
            p.add_term(Mono::ONE.with_exp(i, 2), half);
            p.add_term(Mono::ONE.with_exp(dim + i, 2), half);
        }
        p
    }

    /// `|z_i|^2 = x_i^2 + p_i^2`.
    pub fn abs_z_sq(dim: usize, i: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Mono::ONE.with_exp(i, 2), Cx::one());
        p.add_term(Mono::ONE.with_exp(dim + i, 2), Cx::one());
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, Cx<T>)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, ax: &[u32], ap: &[u32]) -> Cx<T> {
        self.terms
            .get(&Mono::from_parts(ax, ap))
            .copied()
            .unwrap_or_else(Cx::zero)
    }

    pub fn coeff_of(&self, m: Mono) -> Cx<T> {
        self.terms.get(&m).copied().unwrap_or_else(Cx::zero)
    }

    pub fn constant_term(&self) -> Cx<T> {
        self.coeff_of(Mono::ONE)
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: Cx<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Mono, Cx<T>)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(m, v)| (m, v * c)))
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(Complex::new(c, T::zero()))
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(m, v)| (m, v.conj())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Product with all terms of total degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ma, ca) in self.terms() {
            let da = ma.degree();
            if da > max_degree {
                continue;
            }
            for (mb, cb) in other.terms() {
                if da + mb.degree() <= max_degree {
                    out.add_term(ma.times(mb), ca * cb);
                }
            }
        }
        out
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.terms().filter(|(m, _)| m.degree() <= max_degree),
        )
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Self::from_terms(self.dim, self.terms().filter(|(m, _)| m.degree() == degree))
    }

    /// Partial derivative with respect to the variable in packed `slot`.
    pub fn deriv_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in self.terms() {
            let e = m.exp(slot);
            if e > 0 {
                out.add_term(m.with_exp(slot, e - 1), c * T::from_u32(e).unwrap());
            }
        }
        out
    }

    pub fn dx(&self, i: usize) -> Self {
        self.deriv_slot(i)
    }

    pub fn dp(&self, i: usize) -> Self {
        self.deriv_slot(self.dim + i)
    }

    /// Mixed derivative `d_x^alpha d_p^beta`.
    pub fn deriv(&self, alpha: &[u32], beta: &[u32]) -> Self {
        let orders: Vec<(usize, u32)> = alpha
            .iter()
            .enumerate()
            .map(|(i, &k)| (i, k))
            .chain(beta.iter().enumerate().map(|(i, &k)| (self.dim + i, k)))
            .filter(|&(_, k)| k > 0)
            .collect();
        let mut out = Self::zero(self.dim);
        'terms: for (m, c) in self.terms() {
            let mut coeff = c;
            let mut mono = m;
            for &(slot, k) in &orders {
                let e = mono.exp(slot);
                if k > e {
                    continue 'terms;
                }
                let mut f = 1.0f64;
                for j in 0..k {
                    f *= f64::from(e - j);
                }
                coeff = coeff * T::lit(f);
                mono = mono.with_exp(slot, e - k);
            }
            out.add_term(mono, coeff);
        }
        out
    }

    pub fn eval(&self, x: &[T], p: &[T]) -> Cx<T> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(p.len(), self.dim);
        let mut acc = Cx::zero();
        for (m, c) in self.terms() {
            let mut v = T::one();
            for i in 0..self.dim {
                v = v * x[i].powi(m.exp(i) as i32) * p[i].powi(m.exp(self.dim + i) as i32);
            }
            acc = acc + c * v;
        }
        acc
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_abs(&self) -> T {
        self.terms
            .values()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    /// Largest coefficientwise difference `max |a - b|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self - other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: T) -> Self {
        Self::from_terms(self.dim, self.terms().filter(|(_, c)| c.norm() > tol))
    }

    /// Largest imaginary part over the coefficients.
    pub fn max_imag(&self) -> T {
        self.terms
            .values()
            .map(|c| c.im.abs())
            .fold(T::zero(), T::max)
    }

    pub fn real_part(&self) -> Self {
        Self::from_terms(
            self.dim,
            self.terms()
                .map(|(m, c)| (m, Complex::new(c.re, T::zero()))),
        )
    }

    /// Converts between scalar types.
    pub fn cast<U: Real>(&self) -> PhasePolynomial<U> {
        PhasePolynomial::from_terms(
            self.dim,
            self.terms().map(|(m, c)| {
                (
                    m,
                    Complex::new(
                        U::lit(c.re.to_f64().unwrap()),
                        U::lit(c.im.to_f64().unwrap()),
                    ),
                )
            }),
        )
    }

    /// Total parity in the `(x, p)` variables: `Some(true)` if every term has
    /// even degree, `Some(false)` if every term is odd.
    pub fn total_parity(&self) -> Option<bool> {
        let mut even = true;
        let mut odd = true;
        for m in self.terms.keys() {
            if m.degree() % 2 == 0 {
                odd = false;
            } else {
                even = false;
            }
        }
        match (even, odd) {
            (true, _) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }
}

impl<T: Real> fmt::Debug for PhasePolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for i in 0..self.dim {
                match m.exp(i) {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    e => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
            for i in 0..self.dim {
                match m.exp(self.dim + i) {
                    0 => {}
                    1 => write!(f, "·p{}", i + 1)?,
                    e => write!(f, "·p{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl<'a, T: Real> Add<&'a PhasePolynomial<T>> for &'a PhasePolynomial<T> {
    type Output = PhasePolynomial<T>;
    fn add(self, rhs: &PhasePolynomial<T>) -> PhasePolynomial<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, T: Real> Sub<&'a PhasePolynomial<T>> for &'a PhasePolynomial<T> {
    type Output = PhasePolynomial<T>;
    fn sub(self, rhs: &PhasePolynomial<T>) -> PhasePolynomial<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, T: Real> Mul<&'a PhasePolynomial<T>> for &'a PhasePolynomial<T> {
    type Output = PhasePolynomial<T>;
    fn mul(self, rhs: &PhasePolynomial<T>) -> PhasePolynomial<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let mut out = PhasePolynomial::zero(self.dim);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl<T: Real> Neg for &PhasePolynomial<T> {
    type Output = PhasePolynomial<T>;
    fn neg(self) -> PhasePolynomial<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> AddAssign<&PhasePolynomial<T>> for PhasePolynomial<T> {
    fn add_assign(&mut self, rhs: &PhasePolynomial<T>) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        for (m, c) in rhs.terms() {
            self.add_term(m, c);
        }
    }
}

impl<T: Real> SubAssign<&PhasePolynomial<T>> for PhasePolynomial<T> {
    fn sub_assign(&mut self, rhs: &PhasePolynomial<T>) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        for (m, c) in rhs.terms() {
            self.add_term(m, -c);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    ax: Vec<u32>,
    ap: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyDto {
    dim: usize,
    terms: Vec<TermDto>,
}

impl<T: Real> Serialize for PhasePolynomial<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = PolyDto {
            dim: self.dim,
            terms: self
                .terms()
                .map(|(m, c)| TermDto {
                    ax: m.x_exps(self.dim),
                    ap: m.p_exps(self.dim),
                    re: c.re.to_f64().unwrap_or(f64::NAN),
                    im: c.im.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for PhasePolynomial<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = PolyDto::deserialize(d)?;
        if dto.dim == 0 || dto.dim > MAX_DIM {
            return Err(D::Error::custom(format!("dim must be in 1..={MAX_DIM}")));
        }
        let mut p = PhasePolynomial::zero(dto.dim);
        for t in dto.terms {
            if t.ax.len() != dto.dim || t.ap.len() != dto.dim {
                return Err(D::Error::custom("exponent vector length must equal dim"));
            }
            if t.ax.iter().chain(&t.ap).any(|&e| e > 255) {
                return Err(D::Error::custom("exponent above 255"));
            }
            p.add_term(
                Mono::from_parts(&t.ax, &t.ap),
                Complex::new(T::lit(t.re), T::lit(t.im)),
            );
        }
        Ok(p)
    }
}

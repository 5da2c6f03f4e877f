//! Real polynomial potentials `V(x)` and semiclassical families `V_0 + hbar V_1 + ...`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{factorial, Real};
use crate::symbolcalc::{PhasePolynomial, MAX_DIM};

/// `sum_alpha c_alpha x^alpha`, real coefficients, no stored zeros.
#[derive(Clone, PartialEq)]
pub struct Potential<T: Real> {
    dim: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Real> Potential<T> {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        Potential {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self::monomial(dim, &vec![0; dim], c)
    }

    pub fn monomial(dim: usize, alpha: &[u32], c: T) -> Self {
        let mut v = Self::zero(dim);
        v.add_term(alpha, c);
        v
    }

    /// `c x_i`.
    pub fn linear(dim: usize, i: usize, c: T) -> Self {
        let mut alpha = vec![0; dim];
        alpha[i] = 1;
        Self::monomial(dim, &alpha, c)
    }

    pub fn from_terms<'a>(
        dim: usize,
        terms: impl IntoIterator<Item = (&'a [u32], T)>,
    ) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut v = Self::zero(dim);
        for (alpha, c) in terms {
            if alpha.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: alpha.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("potential coefficient".into()));
            }
            v.add_term(alpha, c);
        }
        Ok(v)
    }

    pub fn add_term(&mut self, alpha: &[u32], c: T) {
        assert_eq!(alpha.len(), self.dim);
        let e = self.terms.entry(alpha.to_vec()).or_insert_with(T::zero);
        *e = *e + c;
        if *e == T::zero() {
            self.terms.remove(alpha);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], T)> {
        self.terms.iter().map(|(a, c)| (a.as_slice(), *c))
    }

    pub fn coeff(&self, alpha: &[u32]) -> T {
        self.terms.get(alpha).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .map(|(a, c)| {
                a.iter()
                    .zip(x)
                    .fold(*c, |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    /// Even in each variable separately.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|a| a.iter().all(|e| e % 2 == 0))
    }

    /// `V(-x) = V(x)`.
    pub fn is_even_total(&self) -> bool {
        self.terms.keys().all(|a| a.iter().sum::<u32>() % 2 == 0)
    }

    /// `V(-x) = -V(x)`.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|a| a.iter().sum::<u32>() % 2 == 1)
    }

    pub fn even_part(&self) -> Self {
        self.filter(|a| a.iter().sum::<u32>() % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|a| a.iter().sum::<u32>() % 2 == 1)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        self.filter(|a| a.iter().sum::<u32>() == degree)
    }

    pub fn truncate(&self, degree: u32) -> Self {
        self.filter(|a| a.iter().sum::<u32>() <= degree)
    }

    fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        Potential {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, c) in self.terms() {
            out.add_term(a, c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (a, c) in self.terms() {
            for (b, d) in other.terms() {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(&s, c * d);
            }
        }
        Ok(out)
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, c) in self.terms() {
            if a[i] > 0 {
                let mut b = a.to_vec();
                b[i] -= 1;
                out.add_term(&b, c * T::lit(f64::from(a[i])));
            }
        }
        out
    }

    /// Gradient at the origin.
    pub fn gradient_at_origin(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                let mut a = vec![0; self.dim];
                a[i] = 1;
                self.coeff(&a)
            })
            .collect()
    }

    /// Hessian at the origin (row-major, `n x n`).
    pub fn hessian_at_origin(&self) -> Vec<Vec<T>> {
        let n = self.dim;
        let mut h = vec![vec![T::zero(); n]; n];
        for (i, row) in h.iter_mut().enumerate() {
            for (j, hij) in row.iter_mut().enumerate() {
                let mut a = vec![0; n];
                a[i] += 1;
                a[j] += 1;
                let c = self.coeff(&a);
                *hij = if i == j { c * T::lit(2.0) } else { c };
            }
        }
        h
    }

    /// Taylor coefficient `d^alpha V(0) / alpha!` is simply the stored coefficient;
    /// this returns the derivative `d^alpha V(0)` itself.
    pub fn derivative_at_origin(&self, alpha: &[u32]) -> T {
        self.coeff(alpha) * T::lit(alpha.iter().map(|&a| factorial(a)).product())
    }

    /// The same polynomial viewed as a phase-space symbol (no `p` dependence).
    pub fn to_phase(&self) -> PhasePolynomial<T> {
        let zeros = vec![0; self.dim];
        let mut out = PhasePolynomial::zero(self.dim);
        for (a, c) in self.terms() {
            out += &PhasePolynomial::monomial(self.dim, a, &zeros, Complex::new(c, T::zero()));
        }
        out
    }

    /// Inverse of [`Potential::to_phase`]; fails if `p` appears or a coefficient is not real.
    pub fn from_phase(p: &PhasePolynomial<T>, tol: T) -> Result<Self> {
        let n = p.dim();
        let mut out = Self::zero(n);
        for (m, c) in p.terms() {
            if m.p_exps(n).iter().any(|&e| e > 0) {
                return Err(Error::InvalidArgument("symbol depends on p".into()));
            }
            if c.im.abs() > tol {
                return Err(Error::InvalidArgument("complex coefficient".into()));
            }
            out.add_term(&m.x_exps(n), c.re);
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let diff = self.sub(other).expect("dimensions agree");
        diff.terms().map(|(_, c)| c.abs()).fold(T::zero(), T::max)
    }

    pub fn prune(&self, tol: T) -> Self {
        self.filter(|a| self.coeff(a).abs() > tol)
    }

    pub fn cast<U: Real>(&self) -> Potential<U> {
        let mut out = Potential::zero(self.dim);
        for (a, c) in self.terms() {
            out.add_term(a, U::lit(c.to_f64().expect("finite")));
        }
        out
    }
}

impl<T: Real> fmt::Debug for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(a, c)| {
                let vars: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    alpha: Vec<u32>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PotentialDto {
    dim: usize,
    terms: Vec<TermDto>,
}

impl<T: Real> Serialize for Potential<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = PotentialDto {
            dim: self.dim,
            terms: self
                .terms()
                .map(|(a, c)| TermDto {
                    alpha: a.to_vec(),
                    coeff: c.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Potential<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = PotentialDto::deserialize(d)?;
        let terms: Vec<(Vec<u32>, T)> = dto
            .terms
            .into_iter()
            .map(|t| (t.alpha, T::lit(t.coeff)))
            .collect();
        Potential::from_terms(dto.dim, terms.iter().map(|(a, c)| (a.as_slice(), *c)))
            .map_err(serde::de::Error::custom)
    }
}

/// `V_0 + hbar V_1 + hbar^2 V_2 + ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SemiclassicalPotential<T: Real> {
    pub orders: Vec<Potential<T>>,
}

impl<T: Real> SemiclassicalPotential<T> {
    pub fn new(orders: Vec<Potential<T>>) -> Result<Self> {
        let Some(first) = orders.first() else {
            return Err(Error::InvalidArgument("empty semiclassical family".into()));
        };
        if let Some(bad) = orders.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: bad.dim(),
            });
        }
        Ok(SemiclassicalPotential { orders })
    }

    pub fn dim(&self) -> usize {
        self.orders[0].dim()
    }

    /// `sum_k hbar^k V_k` at a fixed `hbar`.
    pub fn at_hbar(&self, hbar: T) -> Potential<T> {
        let mut out = Potential::zero(self.dim());
        let mut w = T::one();
        for v in &self.orders {
            out = out.add(&v.scale(w)).expect("dimensions agree");
            w = w * hbar;
        }
        out
    }
}

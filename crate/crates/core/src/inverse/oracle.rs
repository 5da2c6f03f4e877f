//! Sources of band-invariant data for the recovery algorithms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::linalg::solve_equilibrated;
use crate::averaging::{average_poly, delta_average, Potential, SemiclassicalPotential};
use crate::error::{Error, Result};
use crate::invariants::{
    band_invariant_first, cluster_mean, compose_poly, expansion_fit, geometric_grid,
    homogeneous_gaussian_moments, odd_invariant, quantum_trace_series, second_invariant,
    second_invariant_expansion, semiclassical_invariant, sphere_invariant_poly, EnergyShift,
    PolyFn, SzegoMode, WeightSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSource {
    Classical,
    Quantum,
}

/// `sum_p c_p mu^p` extracted from invariant values as functions of the
/// Gaussian rate `mu` (equivalently, the expansion in the dilation `lambda`
/// obtained from `mu -> mu / lambda^2`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    pub coefficients: BTreeMap<i32, f64>,
    pub condition_number: f64,
}

impl LaurentSeries {
    pub fn exact(coefficients: BTreeMap<i32, f64>) -> Self {
        LaurentSeries {
            coefficients,
            condition_number: 1.0,
        }
    }

    pub fn coefficient(&self, p: i32) -> f64 {
        self.coefficients.get(&p).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, mu: f64) -> f64 {
        self.coefficients.iter().map(|(p, c)| c * mu.powi(*p)).sum()
    }
}

/// Least-squares extraction of the powers `p_lo..=p_hi` of `mu` from values
/// `f(mu)` sampled at Chebyshev points in `1/mu`.
pub fn fit_laurent(f: impl Fn(f64) -> Result<f64>, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
    if p_lo > p_hi {
        return Err(Error::InvalidArgument(format!(
            "empty power range {p_lo}..{p_hi}"
        )));
    }
    let k = (p_hi - p_lo + 1) as usize;
    let m = 2 * k + 6;
    let (ta, tb) = (0.5, 2.0);
    let mus: Vec<f64> = (0..m)
        .map(|i| {
            let c = (PI * (i as f64 + 0.5) / m as f64).cos();
            1.0 / (0.5 * (ta + tb) + 0.5 * (tb - ta) * c)
        })
        .collect();
    let values = mus.iter().map(|&mu| f(mu)).collect::<Result<Vec<f64>>>()?;
    let a = DMatrix::from_fn(m, k, |i, j| mus[i].powi(p_lo + j as i32));
    let sol = solve_equilibrated(&a, &DVector::from_vec(values))?;
    let coefficients = (0..k).map(|j| (p_lo + j as i32, sol.solution[j])).collect();
    Ok(LaurentSeries {
        coefficients,
        condition_number: sol.condition_number,
    })
}

/// Answers band-invariant queries about a fixed (hidden) potential.
///
/// All weights are `e^{-mu H_0}` unless stated otherwise. The expansion
/// queries return the invariant as a Laurent polynomial in `mu` over the
/// requested power range; the default implementations fit sampled values.
pub trait InvariantOracle: Sync {
    fn source(&self) -> OracleSource;
    fn dim(&self) -> usize;
    /// Agreement expected between this source and exact values.
    fn tolerance(&self) -> f64;

    /// `int f(H_0) phi(V^ave)`.
    fn first(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64>;
    /// `int f(H_0) phi(V^Delta)`; odd potentials only.
    fn odd(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64>;
    /// Second coefficient for `phi(s) = s^{l+1}`.
    fn second(&self, weight: &WeightSpec, l: u32) -> Result<f64>;
    /// Normalized sphere average of `phi(V^ave)` on `H_0 = E`.
    fn sphere(&self, energy: f64, phi: &PolyFn) -> Result<f64>;
    /// Leading order-`k` invariant `int f(H_0) (V_0^ave)^l V_k^ave`.
    fn semiclassical(&self, _weight: &WeightSpec, _l: u32, _k: usize) -> Result<f64> {
        Err(Error::Unsupported("semiclassical queries".into()))
    }

    fn first_expansion(&self, phi: &PolyFn, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        fit_laurent(
            |mu| self.first(&WeightSpec::Gaussian { mu }, phi),
            p_lo,
            p_hi,
        )
    }
    fn odd_expansion(&self, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        fit_laurent(
            |mu| self.odd(&WeightSpec::Gaussian { mu }, &PolyFn::identity()),
            p_lo,
            p_hi,
        )
    }
    fn second_expansion(&self, l: u32, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        fit_laurent(
            |mu| self.second(&WeightSpec::Gaussian { mu }, l),
            p_lo,
            p_hi,
        )
    }
    fn semiclassical_expansion(
        &self,
        l: u32,
        k: usize,
        p_lo: i32,
        p_hi: i32,
    ) -> Result<LaurentSeries> {
        fit_laurent(
            |mu| self.semiclassical(&WeightSpec::Gaussian { mu }, l, k),
            p_lo,
            p_hi,
        )
    }
}

/// Exact phase-space integrals of a known potential; expansions are read off
/// from homogeneous parts.
#[derive(Clone, Debug)]
pub struct ClassicalOracle {
    family: SemiclassicalPotential<f64>,
}

impl ClassicalOracle {
    pub fn new(v: Potential<f64>) -> Self {
        ClassicalOracle {
            family: SemiclassicalPotential { orders: vec![v] },
        }
    }

    pub fn semiclassical(family: SemiclassicalPotential<f64>) -> Self {
        ClassicalOracle { family }
    }

    fn v(&self) -> &Potential<f64> {
        &self.family.orders[0]
    }

    fn laurent_of(
        &self,
        p: &crate::symbolcalc::PhasePolynomial<f64>,
        p_lo: i32,
        p_hi: i32,
    ) -> LaurentSeries {
        let n = self.dim() as i32;
        let coefficients = homogeneous_gaussian_moments(p)
            .into_iter()
            .map(|(d, c)| (-n - d as i32 / 2, c))
            .filter(|(q, _)| (p_lo..=p_hi).contains(q))
            .collect();
        LaurentSeries::exact(coefficients)
    }
}

impl InvariantOracle for ClassicalOracle {
    fn source(&self) -> OracleSource {
        OracleSource::Classical
    }

    fn dim(&self) -> usize {
        self.v().dim()
    }

    fn tolerance(&self) -> f64 {
        1e-10
    }

    fn first(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
        band_invariant_first(self.v(), weight, phi)
    }

    fn odd(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
        odd_invariant(self.v(), weight, phi)
    }

    fn second(&self, weight: &WeightSpec, l: u32) -> Result<f64> {
        second_invariant(self.v(), weight, l, EnergyShift::Difference)
    }

    fn sphere(&self, energy: f64, phi: &PolyFn) -> Result<f64> {
        sphere_invariant_poly(self.v(), energy, phi)
    }

    fn semiclassical(&self, weight: &WeightSpec, l: u32, k: usize) -> Result<f64> {
        semiclassical_invariant(&self.family, weight, l, k)
    }

    fn first_expansion(&self, phi: &PolyFn, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        Ok(self.laurent_of(&compose_poly(phi, &average_poly(self.v())), p_lo, p_hi))
    }

    fn odd_expansion(&self, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        if !self.v().is_odd() {
            return Err(Error::Parity("odd invariant needs an odd potential".into()));
        }
        Ok(self.laurent_of(&delta_average(self.v()), p_lo, p_hi))
    }

    fn second_expansion(&self, l: u32, p_lo: i32, p_hi: i32) -> Result<LaurentSeries> {
        let mut c = second_invariant_expansion(self.v(), l, EnergyShift::Difference)?;
        c.retain(|q, _| (p_lo..=p_hi).contains(q));
        Ok(LaurentSeries::exact(c))
    }

    fn semiclassical_expansion(
        &self,
        l: u32,
        k: usize,
        p_lo: i32,
        p_hi: i32,
    ) -> Result<LaurentSeries> {
        let orders = &self.family.orders;
        if k == 0 || k >= orders.len() {
            return Err(Error::InvalidArgument(format!(
                "order {k} outside 1..{}",
                orders.len()
            )));
        }
        let p = &average_poly(&orders[0]).pow(l) * &average_poly(&orders[k]);
        Ok(self.laurent_of(&p, p_lo, p_hi))
    }
}

/// Invariants measured from diagonalized spectra: trace fits over an `hbar`
/// grid for weighted queries and cluster means at `hbar = E/N` for sphere
/// queries.
#[derive(Clone, Debug)]
pub struct QuantumOracle {
    v: Potential<f64>,
    pub hbar_max: f64,
    pub ratio: f64,
    pub count: usize,
    pub szego_n: u32,
}

impl QuantumOracle {
    pub fn new(v: Potential<f64>) -> Self {
        QuantumOracle {
            v,
            hbar_max: 0.1,
            ratio: 0.8,
            count: 8,
            szego_n: 80,
        }
    }

    pub fn with_szego_n(mut self, n: u32) -> Self {
        self.szego_n = n;
        self
    }

    fn fit(
        &self,
        weight: &WeightSpec,
        phi: impl Fn(f64) -> f64 + Sync,
        rescale: bool,
        order: u32,
    ) -> Result<f64> {
        let grid = geometric_grid(self.hbar_max, self.ratio, self.count);
        let series = quantum_trace_series(&self.v, weight, phi, &grid, rescale)?;
        Ok(expansion_fit(&series, &[0, 1, 2])?.coefficient(order))
    }
}

impl InvariantOracle for QuantumOracle {
    fn source(&self) -> OracleSource {
        OracleSource::Quantum
    }

    fn dim(&self) -> usize {
        self.v.dim()
    }

    fn tolerance(&self) -> f64 {
        1e-2
    }

    fn first(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
        self.fit(weight, |s| phi.eval(s), false, 0)
    }

    fn odd(&self, weight: &WeightSpec, phi: &PolyFn) -> Result<f64> {
        if !self.v.is_odd() {
            return Err(Error::Parity("odd invariant needs an odd potential".into()));
        }
        self.fit(weight, |s| phi.eval(s), true, 0)
    }

    fn second(&self, weight: &WeightSpec, l: u32) -> Result<f64> {
        self.fit(weight, |s| s.powi(l as i32 + 1), false, 2)
    }

    fn sphere(&self, energy: f64, phi: &PolyFn) -> Result<f64> {
        cluster_mean(
            &self.v,
            energy,
            self.szego_n,
            |s| phi.eval(s),
            SzegoMode::Average,
        )
    }
}

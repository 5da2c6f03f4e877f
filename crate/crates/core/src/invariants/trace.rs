//! Quantum trace moments of cluster data and their small-`hbar` fits.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weight::WeightSpec;
use crate::averaging::Potential;
use crate::error::{Error, Result};
use crate::oscillator::{clusters, compute_spectrum, BasisSpec, ClusterSet};

/// Weight tail below which the trusted window is considered to cover `f`.
pub const WEIGHT_TAIL: f64 = 1e-14;

/// Largest condition number accepted by [`expansion_fit`].
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClassicalIntegral,
    QuantumTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl InvariantSeries {
    /// Sorts by grid value; rejects repeated grid points and non-finite values.
    pub fn new(grid: Vec<f64>, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                left: grid.len(),
                right: values.len(),
            });
        }
        let mut pairs: Vec<(f64, f64)> = grid.into_iter().zip(values).collect();
        if pairs.iter().any(|(g, v)| !g.is_finite() || !v.is_finite()) {
            return Err(Error::NonFinite("invariant series".into()));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "series grid must be strictly increasing".into(),
            ));
        }
        let (grid, values) = pairs.into_iter().unzip();
        Ok(InvariantSeries {
            grid,
            values,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `grid,value,provenance` rows.
    pub fn to_csv(&self) -> String {
        let tag = match self.provenance {
            Provenance::ClassicalIntegral => "classical-integral",
            Provenance::QuantumTrace => "quantum-trace",
        };
        let mut s = String::from("grid,value,provenance\n");
        for (g, v) in self.grid.iter().zip(&self.values) {
            s.push_str(&format!("{g:.17e},{v:.17e},{tag}\n"));
        }
        s
    }
}

/// `(2 pi hbar)^n sum_j f(hbar (j + n/2)) sum_k phi(mu_{j,k} / scale)`.
///
/// `scale = 1` gives the plain moments; `scale = hbar^2` the rescaled ones
/// used for odd potentials.
pub fn trace_moments_scaled(
    cs: &ClusterSet,
    weight: &WeightSpec,
    phi: impl Fn(f64) -> f64,
    scale: f64,
) -> Result<f64> {
    weight.validate()?;
    let h = cs.hbar;
    let half = cs.dim as f64 / 2.0;
    let top = cs.clusters.last().map_or(0.0, |c| h * f64::from(c.j));
    let needed = weight.support_end(WEIGHT_TAIL);
    if top < needed {
        return Err(Error::WindowExceeded(format!(
            "weight extends to energy {needed:.3} but clusters are trusted only up to {top:.3}"
        )));
    }
    let mut acc = 0.0;
    for c in &cs.clusters {
        let f = weight.eval(h * (f64::from(c.j) + half));
        if f == 0.0 {
            continue;
        }
        acc += f * c.shifts.iter().map(|m| phi(m / scale)).sum::<f64>();
    }
    let val = (2.0 * PI * h).powi(cs.dim as i32) * acc;
    if val.is_finite() {
        Ok(val)
    } else {
        Err(Error::NonFinite("trace moment".into()))
    }
}

pub fn trace_moments(
    cs: &ClusterSet,
    weight: &WeightSpec,
    phi: impl Fn(f64) -> f64,
) -> Result<f64> {
    trace_moments_scaled(cs, weight, phi, 1.0)
}

/// Clusters of `S_0 + hbar^2 V` over a window covering `weight`.
pub fn clusters_for_weight(
    v: &Potential<f64>,
    weight: &WeightSpec,
    hbar: f64,
) -> Result<ClusterSet> {
    let basis = BasisSpec::for_energy(v.dim(), hbar, weight.support_end(WEIGHT_TAIL))?;
    basis.check_buffer(v.degree())?;
    clusters(&compute_spectrum(v, &basis)?)
}

/// Trace moments over an `hbar` grid, in parallel; `rescale` divides the
/// shifts by `hbar^2` first.
pub fn quantum_trace_series<F>(
    v: &Potential<f64>,
    weight: &WeightSpec,
    phi: F,
    hbars: &[f64],
    rescale: bool,
) -> Result<InvariantSeries>
where
    F: Fn(f64) -> f64 + Sync,
{
    let values = hbars
        .par_iter()
        .map(|&h| {
            let cs = clusters_for_weight(v, weight, h)?;
            trace_moments_scaled(&cs, weight, &phi, if rescale { h * h } else { 1.0 })
        })
        .collect::<Result<Vec<f64>>>()?;
    InvariantSeries::new(hbars.to_vec(), values, Provenance::QuantumTrace)
}

/// Geometric grid `h_max r^k`, `k = 0..count`, ascending.
pub fn geometric_grid(h_max: f64, ratio: f64, count: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..count).map(|k| h_max * ratio.powi(k as i32)).collect();
    g.reverse();
    g
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub orders: Vec<u32>,
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual.
    pub residual: f64,
    pub condition_number: f64,
}

impl ExpansionFit {
    /// Coefficient of `hbar^order`, zero if not fitted.
    pub fn coefficient(&self, order: u32) -> f64 {
        self.orders
            .iter()
            .position(|o| *o == order)
            .map_or(0.0, |i| self.coefficients[i])
    }
}

/// Least-squares fit of `sum_o c_o hbar^o` to the series.
pub fn expansion_fit(series: &InvariantSeries, orders: &[u32]) -> Result<ExpansionFit> {
    let m = series.len();
    if m < 5 {
        return Err(Error::InvalidArgument(format!(
            "at least 5 grid points required, got {m}"
        )));
    }
    if orders.is_empty() || m <= orders.len() {
        return Err(Error::InvalidArgument(
            "more grid points than fitted orders required".into(),
        ));
    }
    let ratios: Vec<f64> = series.grid.windows(2).map(|w| w[1] / w[0]).collect();
    if series.grid[0] <= 0.0
        || ratios
            .iter()
            .any(|r| (r - ratios[0]).abs() > 1e-6 * ratios[0])
    {
        return Err(Error::InvalidArgument(
            "grid must be positive and geometric".into(),
        ));
    }
    let a = DMatrix::from_fn(m, orders.len(), |i, j| {
        series.grid[i].powi(orders[j] as i32)
    });
    let b = DVector::from_column_slice(&series.values);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let r = &a * &x - &b;
    Ok(ExpansionFit {
        orders: orders.to_vec(),
        coefficients: x.iter().copied().collect(),
        residual: (r.norm_squared() / m as f64).sqrt(),
        condition_number: cond,
    })
}

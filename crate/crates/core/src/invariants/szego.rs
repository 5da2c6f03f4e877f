//! Cluster averages against sphere averages.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sphere::sphere_average_invariant;
use crate::averaging::{average_poly, delta_average, Potential};
use crate::error::{Error, Result};
use crate::oscillator::{clusters, compute_spectrum, BasisSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzegoPoint {
    pub n: u32,
    pub hbar: f64,
    pub cluster_mean: f64,
    pub sphere_value: f64,
    pub gap: f64,
}

/// Which cluster statistic is compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SzegoMode {
    /// `phi(mu)` against `phi(V^ave)`.
    Average,
    /// `phi(mu / hbar^2)` against `phi(V^Delta)`, for odd `V`.
    OddRescaled,
}

/// Mean of `phi` over the shifts of cluster `N` at `hbar = E/N`.
pub fn cluster_mean(
    v: &Potential<f64>,
    energy: f64,
    n: u32,
    phi: impl Fn(f64) -> f64,
    mode: SzegoMode,
) -> Result<f64> {
    let h = energy / f64::from(n);
    let basis = BasisSpec::for_energy(v.dim(), h, energy)?;
    basis.check_buffer(v.degree())?;
    let cs = clusters(&compute_spectrum(v, &basis)?)?;
    let c = cs
        .get(n)
        .ok_or_else(|| Error::WindowExceeded(format!("cluster {n} not trusted")))?;
    let scale = match mode {
        SzegoMode::Average => 1.0,
        SzegoMode::OddRescaled => h * h,
    };
    Ok(c.shifts.iter().map(|m| phi(m / scale)).sum::<f64>() / c.shifts.len() as f64)
}

/// Gaps `|cluster mean - sphere invariant|` for each `N`.
pub fn szego_compare_mode<F>(
    v: &Potential<f64>,
    energy: f64,
    phi: F,
    n_list: &[u32],
    mode: SzegoMode,
) -> Result<Vec<SzegoPoint>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let g = match mode {
        SzegoMode::Average => average_poly(v),
        SzegoMode::OddRescaled => {
            if !v.is_odd() {
                return Err(Error::Parity(
                    "rescaled comparison needs an odd potential".into(),
                ));
            }
            delta_average(v)
        }
    };
    let sphere_value = sphere_average_invariant(&g, energy, &phi, 32)?;
    n_list
        .par_iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidArgument("N must be positive".into()));
            }
            let cluster_mean = cluster_mean(v, energy, n, &phi, mode)?;
            Ok(SzegoPoint {
                n,
                hbar: energy / f64::from(n),
                cluster_mean,
                sphere_value,
                gap: (cluster_mean - sphere_value).abs(),
            })
        })
        .collect()
}

pub fn szego_compare<F>(
    v: &Potential<f64>,
    energy: f64,
    phi: F,
    n_list: &[u32],
) -> Result<Vec<SzegoPoint>>
where
    F: Fn(f64) -> f64 + Sync,
{
    szego_compare_mode(v, energy, phi, n_list, SzegoMode::Average)
}

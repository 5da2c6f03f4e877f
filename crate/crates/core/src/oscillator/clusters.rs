//! Grouping of eigenvalues into clusters around the levels `hbar j`.

use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{multiplicity, BasisSpec};
use super::spectrum::{compute_spectrum, SpectralData};
use crate::averaging::Potential;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub j: u32,
    pub energies: Vec<f64>,
    /// `mu_{j,k} = (E_{j,k} - hbar j) / hbar^2`.
    pub shifts: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub dim: usize,
    pub hbar: f64,
    pub clusters: Vec<Cluster>,
}

/// Default safety margin: offsets must stay below `hbar / 4`.
pub const DEFAULT_MARGIN: f64 = 0.5;

fn build(
    dim: usize,
    hbar: f64,
    groups: BTreeMap<u32, Vec<f64>>,
    j_trust: u32,
) -> Result<ClusterSet> {
    let mut clusters = Vec::with_capacity(groups.len());
    for j in 0..=j_trust {
        let mut energies = groups.get(&j).cloned().unwrap_or_default();
        if energies.len() != multiplicity(dim, j) {
            let energy = energies.first().copied().unwrap_or(hbar * f64::from(j));
            return Err(Error::ClusterOverlap {
                energy,
                level: i64::from(j),
                offset: f64::NAN,
                limit: f64::NAN,
            });
        }
        energies.sort_by(f64::total_cmp);
        let shifts = energies
            .iter()
            .map(|e| (e - hbar * f64::from(j)) / (hbar * hbar))
            .collect();
        clusters.push(Cluster {
            j,
            energies,
            shifts,
        });
    }
    Ok(ClusterSet {
        dim,
        hbar,
        clusters,
    })
}

/// Nearest-ladder assignment `j = round(E / hbar)` of the trusted eigenvalues,
/// failing when an offset reaches `hbar/2 (1 - margin)` or a cluster count
/// differs from the multiplicity `m_j`.
pub fn detect_clusters(data: &SpectralData, margin: f64) -> Result<ClusterSet> {
    let h = data.basis.hbar;
    let limit = 0.5 * h * (1.0 - margin);
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (e, _) in data.trusted() {
        let j = (e / h).round();
        let offset = (e - j * h).abs();
        if offset >= limit || j < 0.0 {
            return Err(Error::ClusterOverlap {
                energy: e,
                level: j as i64,
                offset,
                limit,
            });
        }
        groups.entry(j as u32).or_default().push(e);
    }
    let top = groups
        .keys()
        .next_back()
        .copied()
        .unwrap_or(0)
        .min(data.basis.j_trust);
    build(data.basis.dim, h, groups, top)
}

/// Clusters from exact level labels.
pub fn clusters_by_label(data: &SpectralData) -> Result<ClusterSet> {
    if data.labels.is_none() {
        return Err(Error::Unsupported(
            "spectral data carries no level labels".into(),
        ));
    }
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (e, j) in data.trusted() {
        groups.entry(j.expect("labeled")).or_default().push(e);
    }
    build(data.basis.dim, data.basis.hbar, groups, data.basis.j_trust)
}

/// Exact labels when available, otherwise nearest-ladder detection.
pub fn clusters(data: &SpectralData) -> Result<ClusterSet> {
    if data.labels.is_some() {
        clusters_by_label(data)
    } else {
        detect_clusters(data, DEFAULT_MARGIN)
    }
}

impl ClusterSet {
    pub fn get(&self, j: u32) -> Option<&Cluster> {
        self.clusters.get(j as usize).filter(|c| c.j == j)
    }

    /// Largest `|E - hbar j|` in cluster `j`.
    pub fn width(&self, j: u32) -> Option<f64> {
        self.get(j).map(|c| {
            c.energies
                .iter()
                .map(|e| (e - self.hbar * f64::from(j)).abs())
                .fold(0.0, f64::max)
        })
    }

    /// `j,k,E,mu` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,k,E,mu\n");
        for c in &self.clusters {
            for (k, (e, mu)) in c.energies.iter().zip(&c.shifts).enumerate() {
                let _ = writeln!(s, "{},{},{:.17e},{:.17e}", c.j, k, e, mu);
            }
        }
        s
    }
}

/// `max_k |E_{j,k} - hbar j|` for the cluster nearest `energy`, per `hbar`.
pub fn cluster_width_scan(v: &Potential<f64>, energy: f64, hbars: &[f64]) -> Result<Vec<f64>> {
    hbars
        .par_iter()
        .map(|&h| {
            let basis = BasisSpec::for_energy(v.dim(), h, energy)?;
            let data = compute_spectrum(v, &basis)?;
            let cs = detect_clusters(&data, DEFAULT_MARGIN)?;
            let j = (energy / h).round() as u32;
            cs.width(j)
                .ok_or_else(|| Error::WindowExceeded(format!("level {j} not trusted")))
        })
        .collect()
}

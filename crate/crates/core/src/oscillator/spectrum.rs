//! Spectra of `S_0 + hbar^2 V` with level labels where they are known exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::BasisSpec;
use super::eigen::{eigensolve, eigensolve_banded};
use super::hamiltonian::{assemble_band_1d, assemble_on_states};
use crate::averaging::Potential;
use crate::error::{Error, Result};

/// Ascending eigenvalues with the trusted window and, when available, the
/// unperturbed level `j` each eigenvalue continues from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub basis: BasisSpec,
    pub eigenvalues: Vec<f64>,
    pub trusted_max_energy: f64,
    /// Exact level labels (1-D by ordering; separable 2-D from the factor labels).
    pub labels: Option<Vec<u32>>,
}

impl SpectralData {
    /// Trusted `(E, label)` pairs.
    pub fn trusted(&self) -> Vec<(f64, Option<u32>)> {
        match &self.labels {
            Some(l) => self
                .eigenvalues
                .iter()
                .zip(l)
                .filter(|(_, &j)| j <= self.basis.j_trust)
                .map(|(&e, &j)| (e, Some(j)))
                .collect(),
            None => self
                .eigenvalues
                .iter()
                .filter(|&&e| e <= self.trusted_max_energy)
                .map(|&e| (e, None))
                .collect(),
        }
    }
}

/// Splits `V` into `V_1(x_1) + V_2(x_2)` when no monomial mixes the variables
/// (constants go to the first factor).
pub fn separable_parts(v: &Potential<f64>) -> Option<(Potential<f64>, Potential<f64>)> {
    if v.dim() != 2 {
        return None;
    }
    let mut v1 = Potential::zero(1);
    let mut v2 = Potential::zero(1);
    for (a, c) in v.terms() {
        match (a[0], a[1]) {
            (e, 0) => v1.add_term(&[e], c),
            (0, e) => v2.add_term(&[e], c),
            _ => return None,
        }
    }
    Some((v1, v2))
}

fn spectrum_1d(v: &Potential<f64>, basis: &BasisSpec) -> Result<Vec<f64>> {
    eigensolve_banded(assemble_band_1d(v, basis)?)
}

/// Eigenvalues of `S_0 + hbar^2 V` on the truncated basis.
///
/// 1-D uses the banded solver; separable 2-D combines two 1-D spectra
/// (`S_0` splits as a sum of the 1-D operators); other 2-D potentials are
/// diagonalized densely within the parity sectors `V` respects.
pub fn compute_spectrum(v: &Potential<f64>, basis: &BasisSpec) -> Result<SpectralData> {
    if v.dim() != basis.dim {
        return Err(Error::DimensionMismatch {
            left: basis.dim,
            right: v.dim(),
        });
    }
    let unlabeled_max = basis.hbar * (f64::from(basis.j_trust) + 0.5);
    match basis.dim {
        1 => {
            let ev = spectrum_1d(v, basis)?;
            let labels: Vec<u32> = (0..ev.len() as u32).collect();
            let tmax = ev[basis.j_trust as usize];
            Ok(SpectralData {
                basis: basis.clone(),
                eigenvalues: ev,
                trusted_max_energy: tmax,
                labels: Some(labels),
            })
        }
        2 => {
            if let Some((v1, v2)) = separable_parts(v) {
                let b1 = BasisSpec::with_trust(1, basis.hbar, basis.j_max, basis.j_trust)?;
                let e1 = spectrum_1d(&v1, &b1)?;
                let e2 = spectrum_1d(&v2, &b1)?;
                let mut pairs: Vec<(f64, u32)> = Vec::with_capacity(basis.size());
                for (a, ea) in e1.iter().enumerate() {
                    for (b, eb) in e2.iter().enumerate().take(basis.j_max as usize + 1 - a) {
                        pairs.push((ea + eb, (a + b) as u32));
                    }
                }
                pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
                let tmax = pairs
                    .iter()
                    .filter(|p| p.1 <= basis.j_trust)
                    .map(|p| p.0)
                    .fold(f64::NEG_INFINITY, f64::max);
                return Ok(SpectralData {
                    basis: basis.clone(),
                    eigenvalues: pairs.iter().map(|p| p.0).collect(),
                    trusted_max_energy: tmax,
                    labels: Some(pairs.iter().map(|p| p.1).collect()),
                });
            }
            let ev = dense_by_parity(v, basis)?;
            Ok(SpectralData {
                basis: basis.clone(),
                eigenvalues: ev,
                trusted_max_energy: unlabeled_max,
                labels: None,
            })
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn dense_by_parity(v: &Potential<f64>, basis: &BasisSpec) -> Result<Vec<f64>> {
    let even_in = |i: usize| v.terms().all(|(a, _)| a[i] % 2 == 0);
    let (e1, e2, et) = (even_in(0), even_in(1), v.is_even_total());
    let mut sectors: BTreeMap<(u32, u32, u32), Vec<Vec<u32>>> = BTreeMap::new();
    for s in basis.states() {
        let key = (
            if e1 { s[0] % 2 } else { 0 },
            if e2 { s[1] % 2 } else { 0 },
            if et && !(e1 && e2) {
                (s[0] + s[1]) % 2
            } else {
                0
            },
        );
        sectors.entry(key).or_default().push(s);
    }
    let mut all = Vec::with_capacity(basis.size());
    for states in sectors.values() {
        let m = assemble_on_states(v, basis, states)?;
        all.extend(eigensolve(&m)?);
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::binomial;

/// Truncated Hermite basis `{|k> : |k| <= j_max}` at a fixed `hbar`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub dim: usize,
    pub hbar: f64,
    pub j_max: u32,
    pub j_trust: u32,
}

/// Default fraction of the basis whose levels are trusted.
pub const TRUST_FRACTION: f64 = 0.6;

impl BasisSpec {
    pub fn new(dim: usize, hbar: f64, j_max: u32) -> Result<Self> {
        let j_trust = (TRUST_FRACTION * f64::from(j_max)).floor() as u32;
        Self::with_trust(dim, hbar, j_max, j_trust)
    }

    pub fn with_trust(dim: usize, hbar: f64, j_max: u32, j_trust: u32) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if j_trust >= j_max {
            return Err(Error::InvalidArgument(format!(
                "j_trust ({j_trust}) must be below j_max ({j_max})"
            )));
        }
        Ok(BasisSpec {
            dim,
            hbar,
            j_max,
            j_trust,
        })
    }

    /// Smallest default basis whose trusted window reaches `energy`.
    pub fn for_energy(dim: usize, hbar: f64, energy: f64) -> Result<Self> {
        let j_trust = (energy / hbar).ceil() as u32 + 2;
        let j_max = (f64::from(j_trust) / TRUST_FRACTION).ceil() as u32 + 1;
        Self::with_trust(dim, hbar, j_max, j_trust)
    }

    /// Checks the buffer between the trusted window and the truncation edge.
    pub fn check_buffer(&self, degree: u32) -> Result<()> {
        let buffer = 2 * degree;
        if self.j_trust + buffer > self.j_max {
            return Err(Error::InvalidArgument(format!(
                "trusted window {} too close to truncation {} for degree {degree}",
                self.j_trust, self.j_max
            )));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        (0..=self.j_max).map(|j| multiplicity(self.dim, j)).sum()
    }

    /// Basis states ordered by total quantum number, then by `k_1` descending.
    pub fn states(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.size());
        for j in 0..=self.j_max {
            match self.dim {
                1 => out.push(vec![j]),
                _ => {
                    for k1 in (0..=j).rev() {
                        out.push(vec![k1, j - k1]);
                    }
                }
            }
        }
        out
    }
}

/// `m_j = C(n + j - 1, n - 1)`, the degeneracy of the level `hbar j`.
pub fn multiplicity(dim: usize, j: u32) -> usize {
    binomial(dim as u32 + j - 1, dim as u32 - 1) as usize
}

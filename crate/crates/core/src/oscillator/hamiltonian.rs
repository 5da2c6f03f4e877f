//! Matrix of `S = S_0 + hbar^2 V` in the Hermite basis, with
//! `x_i = sqrt(hbar/2) (a_i + a_i^dagger)`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;

use super::basis::BasisSpec;
use super::eigen::BandMatrix;
use crate::averaging::Potential;
use crate::error::{Error, Result};

/// Exact matrix elements of `x^m` between 1-D Hermite states.
#[derive(Clone, Debug)]
pub struct PositionPowers {
    hbar: f64,
    /// `cols[m][k]` lists `(k', <k'|x^m|k>)`.
    cols: Vec<Vec<Vec<(usize, f64)>>>,
}

impl PositionPowers {
    pub fn new(hbar: f64, max_power: u32, max_level: usize) -> Self {
        let s = (hbar / 2.0).sqrt();
        let mut cols = vec![(0..=max_level).map(|k| vec![(k, 1.0)]).collect::<Vec<_>>()];
        for _ in 0..max_power {
            let prev = cols.last().unwrap();
            let next = prev
                .iter()
                .map(|v| {
                    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                    for &(k, c) in v {
                        // a^dagger |k> = sqrt(k+1) |k+1>, a |k> = sqrt(k) |k-1>
                        *acc.entry(k + 1).or_default() += c * s * ((k + 1) as f64).sqrt();
                        if k > 0 {
                            *acc.entry(k - 1).or_default() += c * s * (k as f64).sqrt();
                        }
                    }
                    acc.into_iter().filter(|(_, c)| *c != 0.0).collect()
                })
                .collect();
            cols.push(next);
        }
        PositionPowers { hbar, cols }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Nonzero entries `(k', <k'|x^m|k>)`.
    pub fn column(&self, m: u32, k: usize) -> &[(usize, f64)] {
        &self.cols[m as usize][k]
    }

    pub fn element(&self, m: u32, row: usize, col: usize) -> f64 {
        self.column(m, col)
            .iter()
            .find(|(r, _)| *r == row)
            .map_or(0.0, |(_, c)| *c)
    }
}

fn check_potential(v: &Potential<f64>, basis: &BasisSpec) -> Result<()> {
    if v.dim() != basis.dim {
        return Err(Error::DimensionMismatch {
            left: basis.dim,
            right: v.dim(),
        });
    }
    if !(1..=2).contains(&v.dim()) {
        return Err(Error::UnsupportedDimension(v.dim()));
    }
    Ok(())
}

/// 1-D Hamiltonian as a band matrix (half-bandwidth `deg V`).
pub fn assemble_band_1d(v: &Potential<f64>, basis: &BasisSpec) -> Result<BandMatrix<f64>> {
    check_potential(v, basis)?;
    if basis.dim != 1 {
        return Err(Error::UnsupportedDimension(basis.dim));
    }
    let n = basis.j_max as usize + 1;
    let deg = v.degree();
    let h = basis.hbar;
    let pw = PositionPowers::new(h, deg, n - 1);
    let mut m = BandMatrix::zeros(n, (deg as usize).max(1));
    for k in 0..n {
        m.set(k, k, h * k as f64);
    }
    for (alpha, c) in v.terms() {
        for k in 0..n {
            for &(r, x) in pw.column(alpha[0], k) {
                if r >= k && r < n {
                    m.set(r, k, m.get(r, k) + h * h * c * x);
                }
            }
        }
    }
    Ok(m)
}

/// Dense Hamiltonian over the basis states of `basis` (ordered as
/// [`BasisSpec::states`]).
pub fn assemble_hamiltonian(v: &Potential<f64>, basis: &BasisSpec) -> Result<DMatrix<f64>> {
    check_potential(v, basis)?;
    let states = basis.states();
    assemble_on_states(v, basis, &states)
}

pub(crate) fn assemble_on_states(
    v: &Potential<f64>,
    basis: &BasisSpec,
    states: &[Vec<u32>],
) -> Result<DMatrix<f64>> {
    let h = basis.hbar;
    let deg = v.degree();
    let pw = PositionPowers::new(h, deg, basis.j_max as usize);
    let index: HashMap<&[u32], usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let size = states.len();
    let mut m = DMatrix::<f64>::zeros(size, size);
    for (col, s) in states.iter().enumerate() {
        let j: u32 = s.iter().sum();
        m[(col, col)] += h * f64::from(j);
        for (alpha, c) in v.terms() {
            let coef = h * h * c;
            match basis.dim {
                1 => {
                    for &(r, x) in pw.column(alpha[0], s[0] as usize) {
                        if let Some(&row) = index.get([r as u32].as_slice()) {
                            m[(row, col)] += coef * x;
                        }
                    }
                }
                _ => {
                    for &(r1, x1) in pw.column(alpha[0], s[0] as usize) {
                        for &(r2, x2) in pw.column(alpha[1], s[1] as usize) {
                            if let Some(&row) = index.get([r1 as u32, r2 as u32].as_slice()) {
                                m[(row, col)] += coef * x1 * x2;
                            }
                        }
                    }
                }
            }
        }
    }
    // symmetrize the roundoff-level asymmetry of the products
    let sym = (&m + m.transpose()) * 0.5;
    Ok(sym)
}

//! Symmetric eigenvalue solvers: dense (via nalgebra) and banded.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ascending eigenvalues of a dense real symmetric matrix.
pub fn eigensolve(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let norm = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let asym = (m - m.transpose())
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    if asym > 1e-13 * norm.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Symmetric band matrix in lower storage: `bands[d][i] = A[i + d][i]`.
///
/// One extra diagonal beyond the nominal half-bandwidth holds the bulge
/// during reduction.
#[derive(Clone, Debug)]
pub struct BandMatrix<T: Real> {
    n: usize,
    bandwidth: usize,
    bands: Vec<Vec<T>>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth + 1)
            .map(|d| vec![T::zero(); n.saturating_sub(d)])
            .collect();
        BandMatrix {
            n,
            bandwidth,
            bands,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d >= self.bands.len() {
            T::zero()
        } else {
            self.bands[d][c]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d >= self.bands.len() {
            assert!(
                v.abs() <= T::epsilon() * T::lit(1e3),
                "write outside band storage"
            );
            return;
        }
        self.bands[d][c] = v;
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    /// `A <- G A G^T` with `G` the plane rotation acting on rows/cols `(p, p + 1)`.
    fn rotate(&mut self, p: usize, c: T, s: T) {
        let q = p + 1;
        let w = self.bands.len() - 1;
        let lo = p.saturating_sub(w);
        let hi = (q + w).min(self.n - 1);
        for j in lo..=hi {
            if j == p || j == q {
                continue;
            }
            let (apj, aqj) = (self.get(p, j), self.get(q, j));
            if apj == T::zero() && aqj == T::zero() {
                continue;
            }
            self.set(p, j, c * apj + s * aqj);
            self.set(q, j, c * aqj - s * apj);
        }
        let (app, aqq, apq) = (self.get(p, p), self.get(q, q), self.get(p, q));
        let two = T::lit(2.0);
        self.set(p, p, c * c * app + two * c * s * apq + s * s * aqq);
        self.set(q, q, s * s * app - two * c * s * apq + c * c * aqq);
        self.set(p, q, c * s * (aqq - app) + (c * c - s * s) * apq);
    }

    /// Zero `A[row][q]` against `A[row][q - 1]` with a rotation in plane `(q - 1, q)`.
    fn annihilate(&mut self, row: usize, q: usize) {
        let a = self.get(row, q - 1);
        let b = self.get(row, q);
        if b == T::zero() {
            return;
        }
        let r = a.hypot(b);
        let (c, s) = (a / r, b / r);
        self.rotate(q - 1, c, s);
        self.set(row, q, T::zero());
    }

    /// Orthogonal reduction to tridiagonal form by Givens rotations with
    /// bulge chasing; returns `(diagonal, offdiagonal)`.
    pub fn tridiagonalize(mut self) -> (Vec<T>, Vec<T>) {
        let n = self.n;
        for k in (2..=self.bandwidth).rev() {
            for i in 0..n.saturating_sub(k) {
                // remove A[i][i + k], then chase the bulge down the band
                let mut row = i;
                let mut col = i + k;
                while col < n {
                    self.annihilate(row, col);
                    row = col - 1;
                    col = row + k + 1;
                }
            }
        }
        let d = self.bands[0].clone();
        let e = if n > 1 {
            self.bands[1].clone()
        } else {
            Vec::new()
        };
        (d, e)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts; returns them ascending.
pub fn tridiagonal_eigenvalues<T: Real>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..off.len()].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonFinite("tridiagonal QL did not converge".into()));
            }
            let two = T::lit(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}

/// Ascending eigenvalues of a symmetric band matrix in `O(n^2 b)` work.
pub fn eigensolve_banded<T: Real>(m: BandMatrix<T>) -> Result<Vec<T>> {
    if m.bands.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("band matrix entry".into()));
    }
    let (d, e) = m.tridiagonalize();
    tridiagonal_eigenvalues(&d, &e)
}

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex;
use oscbands::{PhasePoly, Pot};
use proptest::prelude::*;

/// Random phase polynomial with small integer-ish coefficients.
pub fn phase_poly(dim: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = PhasePoly> {
    let term = (
        prop::collection::vec(0u32..=max_deg, 2 * dim),
        -3i32..=3,
        -3i32..=3,
    );
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        let mut p = PhasePoly::zero(dim);
        for (exps, re, im) in terms {
            let total: u32 = exps.iter().sum();
            if total > max_deg {
                continue;
            }
            let (ax, ap) = exps.split_at(dim);
            p += &PhasePoly::monomial(
                dim,
                ax,
                ap,
                Complex::new(f64::from(re) * 0.5, f64::from(im) * 0.5),
            );
        }
        p
    })
}

/// Random real potential of degree at most `max_deg`.
pub fn potential(dim: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Pot> {
    let term = (prop::collection::vec(0u32..=max_deg, dim), -4i32..=4);
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        let mut v = Pot::zero(dim);
        for (alpha, c) in terms {
            if alpha.iter().sum::<u32>() <= max_deg {
                v.add_term(&alpha, f64::from(c) * 0.25);
            }
        }
        v
    })
}

pub fn pot(dim: usize, terms: &[(&[u32], f64)]) -> Pot {
    Pot::from_terms(dim, terms.iter().map(|(a, c)| (*a, *c))).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

/// Independent oracle: `-(1/4pi) int_0^{2pi} int_0^u V'(X_s) V'(X_u) sin(u - s) ds du`
/// with `X_s = x cos s + p sin s`, by nested Gauss-Legendre quadrature.
pub fn delta_quadrature(dv: impl Fn(f64) -> f64, x: f64, p: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(48);
    let xs = |s: f64| x * s.cos() + p * s.sin();
    let panels = 8;
    let mut total = 0.0;
    for pu in 0..panels {
        let (ua, ub) = (
            2.0 * PI * pu as f64 / panels as f64,
            2.0 * PI * (pu + 1) as f64 / panels as f64,
        );
        for (tu, wu) in nodes.iter().zip(&weights) {
            let u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * tu;
            let mut inner = 0.0;
            for ps in 0..panels {
                let (sa, sb) = (
                    u * ps as f64 / panels as f64,
                    u * (ps + 1) as f64 / panels as f64,
                );
                for (ts, ws) in nodes.iter().zip(&weights) {
                    let s = 0.5 * (sa + sb) + 0.5 * (sb - sa) * ts;
                    inner += 0.5 * (sb - sa) * ws * dv(xs(s)) * (u - s).sin();
                }
            }
            total += 0.5 * (ub - ua) * wu * inner * dv(xs(u));
        }
    }
    -total / (4.0 * PI)
}

pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            let dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, 0.0);
                for j in 0..n {
                    let q2 = q1;
                    q1 = q0;
                    q0 = ((2 * j + 1) as f64 * z * q1 - j as f64 * q2) / (j + 1) as f64;
                }
                let d = n as f64 * (z * q0 - q1) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * d * d);
                break;
            }
        }
    }
    (x, w)
}

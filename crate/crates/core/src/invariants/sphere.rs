//! Normalized averages over the energy sphere `{H_0 = E}`.

use std::f64::consts::PI;

use super::gaussian::gamma_half;
use super::quadrature::gauss_legendre;
use super::weight::PolyFn;
use crate::averaging::{average_poly, Potential};
use crate::error::{Error, Result};
use crate::symbolcalc::PhasePolynomial;

/// Mean of `prod y_i^{e_i}` over the sphere `|y|^2 = 2E` in `R^{2n}` with unit mass.
pub fn sphere_moment(exps: &[u32], energy: f64) -> f64 {
    if exps.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let big_n = exps.len() as u32;
    let k: u32 = exps.iter().map(|e| e / 2).sum();
    let mut m = (2.0 * energy).powi(k as i32) * gamma_half(big_n) / gamma_half(big_n + 2 * k);
    for e in exps {
        m *= gamma_half(e + 1) / gamma_half(1);
    }
    m
}

/// Exact sphere average of a phase polynomial (real part).
pub fn sphere_average_poly(g: &PhasePolynomial<f64>, energy: f64) -> f64 {
    let n = g.dim();
    g.terms()
        .map(|(m, c)| {
            let exps: Vec<u32> = (0..2 * n).map(|s| m.exp(s)).collect();
            c.re * sphere_moment(&exps, energy)
        })
        .sum()
}

/// `sum_k c_k g^k` as a phase polynomial.
pub fn compose_poly(phi: &PolyFn, g: &PhasePolynomial<f64>) -> PhasePolynomial<f64> {
    let mut out = PhasePolynomial::zero(g.dim());
    let mut pw = PhasePolynomial::one(g.dim());
    for (k, c) in phi.0.iter().enumerate() {
        if k > 0 {
            pw = &pw * g;
        }
        if *c != 0.0 {
            out += &pw.scale_real(*c);
        }
    }
    out
}

/// `int_{H_0 = E} phi(V^ave) d lambda` for polynomial `phi`, exactly.
pub fn sphere_invariant_poly(v: &Potential<f64>, energy: f64, phi: &PolyFn) -> Result<f64> {
    check_energy(energy)?;
    Ok(sphere_average_poly(
        &compose_poly(phi, &average_poly(v)),
        energy,
    ))
}

/// `int_{H_0 = E} phi(V^ave) d lambda` by quadrature with node doubling.
pub fn sphere_invariant(
    v: &Potential<f64>,
    energy: f64,
    phi: impl Fn(f64) -> f64,
    quad_nodes: usize,
) -> Result<f64> {
    sphere_average_invariant(&average_poly(v), energy, phi, quad_nodes)
}

fn check_energy(energy: f64) -> Result<()> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "energy must be positive, got {energy}"
        )));
    }
    Ok(())
}

/// Sphere average of `phi(g)` for a flow-invariant `g`.
///
/// For `n = 2` the sphere is parametrized by `z_1 = sqrt(2Eu) e^{i a}`,
/// `z_2 = sqrt(2E(1-u)) e^{i b}` with `u` uniform; invariance removes one angle.
pub fn sphere_average_invariant(
    g: &PhasePolynomial<f64>,
    energy: f64,
    phi: impl Fn(f64) -> f64,
    quad_nodes: usize,
) -> Result<f64> {
    check_energy(energy)?;
    let rule = |nodes: usize| -> Result<f64> {
        let val = match g.dim() {
            1 => {
                let r = (2.0 * energy).sqrt();
                (0..nodes)
                    .map(|i| {
                        let t = 2.0 * PI * i as f64 / nodes as f64;
                        phi(g.eval(&[r * t.cos()], &[r * t.sin()]).re)
                    })
                    .sum::<f64>()
                    / nodes as f64
            }
            2 => {
                let (us, ws) = gauss_legendre(nodes);
                let mut acc = 0.0;
                for (u, w) in us.iter().zip(&ws) {
                    let u = 0.5 * (u + 1.0);
                    let r1 = (2.0 * energy * u).sqrt();
                    let r2 = (2.0 * energy * (1.0 - u)).sqrt();
                    let mut ring = 0.0;
                    for i in 0..nodes {
                        let a = 2.0 * PI * i as f64 / nodes as f64;
                        ring += phi(g.eval(&[r1 * a.cos(), r2], &[r1 * a.sin(), 0.0]).re);
                    }
                    acc += 0.5 * w * ring / nodes as f64;
                }
                acc
            }
            d => return Err(Error::UnsupportedDimension(d)),
        };
        if val.is_finite() {
            Ok(val)
        } else {
            Err(Error::NonFinite("sphere average".into()))
        }
    };
    let mut nodes = quad_nodes.max(8);
    let mut prev = rule(nodes)?;
    for _ in 0..8 {
        nodes *= 2;
        let next = rule(nodes)?;
        let diff = (next - prev).abs();
        if diff <= 1e-11 * next.abs().max(1e-300) || diff < 1e-14 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature((rule(nodes)? - prev).abs()))
}

//! Moves that leave the spectrum unchanged.

use serde::{Deserialize, Serialize};

use crate::averaging::{Potential, SemiclassicalPotential};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeMove {
    /// `V(O x)` for an orthogonal matrix `O` (row-major).
    Orthogonal { matrix: Vec<Vec<f64>> },
    /// `V(O x)` with `O` the planar rotation by `angle`.
    Rotation { angle: f64 },
    /// `x -> x + b hbar^2`: `V(x + b hbar^2, hbar) + b.x + hbar^2 |b|^2 / 2`.
    Translation { b: Vec<f64> },
}

fn rotation_matrix(angle: f64) -> Vec<Vec<f64>> {
    let (s, c) = angle.sin_cos();
    vec![vec![c, -s], vec![s, c]]
}

/// `V(O x)` by substitution `x_i -> sum_j O_ij x_j`.
pub fn rotate(v: &Potential<f64>, o: &[Vec<f64>]) -> Result<Potential<f64>> {
    let n = v.dim();
    if o.len() != n || o.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: o.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|k| o[k][i] * o[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot - target).abs() > 1e-12 {
                return Err(Error::InvalidArgument("matrix is not orthogonal".into()));
            }
        }
    }
    let forms: Vec<Potential<f64>> = (0..n)
        .map(|i| {
            let mut f = Potential::zero(n);
            for j in 0..n {
                f.add_term(&unit(n, j), o[i][j]);
            }
            f
        })
        .collect();
    let mut out = Potential::zero(n);
    for (alpha, c) in v.terms() {
        let mut t = Potential::constant(n, c);
        for (i, &e) in alpha.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&forms[i])?;
            }
        }
        out = out.add(&t)?;
    }
    Ok(out.prune(1e-14))
}

fn unit(n: usize, j: usize) -> Vec<u32> {
    let mut a = vec![0; n];
    a[j] = 1;
    a
}

/// Applies a move to a semiclassical family (a plain potential is the family
/// with a single order).
pub fn gauge_moves(
    vs: &SemiclassicalPotential<f64>,
    mv: &GaugeMove,
) -> Result<SemiclassicalPotential<f64>> {
    let n = vs.dim();
    match mv {
        GaugeMove::Orthogonal { matrix } => SemiclassicalPotential::new(
            vs.orders
                .iter()
                .map(|v| rotate(v, matrix))
                .collect::<Result<_>>()?,
        ),
        GaugeMove::Rotation { angle } => {
            if n != 2 {
                return Err(Error::UnsupportedDimension(n));
            }
            gauge_moves(
                vs,
                &GaugeMove::Orthogonal {
                    matrix: rotation_matrix(*angle),
                },
            )
        }
        GaugeMove::Translation { b } => translate(vs, b),
    }
}

/// Single-potential convenience for [`gauge_moves`].
pub fn gauge_move(v: &Potential<f64>, mv: &GaugeMove) -> Result<Potential<f64>> {
    let out = gauge_moves(
        &SemiclassicalPotential {
            orders: vec![v.clone()],
        },
        mv,
    )?;
    match out.orders.len() {
        1 => Ok(out.orders[0].clone()),
        _ => Err(Error::Unsupported(
            "translation produces a semiclassical family".into(),
        )),
    }
}

fn translate(vs: &SemiclassicalPotential<f64>, b: &[f64]) -> Result<SemiclassicalPotential<f64>> {
    let n = vs.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.len(),
        });
    }
    let directional = |v: &Potential<f64>| -> Potential<f64> {
        let mut out = Potential::zero(n);
        for (i, bi) in b.iter().enumerate() {
            out = out.add(&v.deriv(i).scale(*bi)).expect("same dimension");
        }
        out
    };
    // V_j(x + b hbar^2) = sum_r hbar^{2r} (b.grad)^r V_j / r!
    let mut orders: Vec<Potential<f64>> = vec![Potential::zero(n); vs.orders.len().max(3)];
    for (j, vj) in vs.orders.iter().enumerate() {
        let mut term = vj.clone();
        let mut r = 0usize;
        while !term.is_zero() {
            let k = j + 2 * r;
            if orders.len() <= k {
                orders.resize(k + 1, Potential::zero(n));
            }
            orders[k] = orders[k].add(&term)?;
            r += 1;
            term = directional(&term).scale(1.0 / r as f64);
        }
    }
    for (i, bi) in b.iter().enumerate() {
        orders[0].add_term(&unit(n, i), *bi);
    }
    orders[2].add_term(&vec![0; n], 0.5 * b.iter().map(|x| x * x).sum::<f64>());
    SemiclassicalPotential::new(orders.into_iter().map(|v| v.prune(1e-14)).collect())
}

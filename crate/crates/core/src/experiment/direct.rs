//! Spectra, clusters, band invariants and Szegő comparisons.

use serde_json::json;

use super::config::ExperimentConfig;
use super::report::TaskOutput;
use crate::averaging::Potential;
use crate::error::{Error, Result};
use crate::invariants::{
    band_invariant_first, expansion_fit, geometric_grid, odd_invariant, quantum_trace_series,
    second_invariant, szego_compare, EnergyShift, PolyFn, WeightSpec,
};
use crate::oscillator::{
    cluster_width_scan, clusters, compute_spectrum, multiplicity, quadratic_exact_spectrum,
    BasisSpec,
};

pub(crate) fn potential(cfg: &ExperimentConfig) -> Result<&Potential<f64>> {
    cfg.potential
        .as_ref()
        .ok_or_else(|| Error::Config("missing potential".into()))
}

fn req<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Config(format!("missing parameter `{name}`")))
}

pub(crate) fn phis(cfg: &ExperimentConfig) -> Result<Vec<PolyFn>> {
    Ok(req(&cfg.params.phi, "phi")?
        .into_iter()
        .map(PolyFn)
        .collect())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `C_1 |x|^2 + C_2` when `v` has exactly that form.
fn isotropic_quadratic(v: &Potential<f64>) -> Option<(f64, f64)> {
    let n = v.dim();
    let c1 = v.coeff(
        &(0..n)
            .map(|i| if i == 0 { 2 } else { 0 })
            .collect::<Vec<_>>(),
    );
    for (a, c) in v.terms() {
        let deg: u32 = a.iter().sum();
        let pure = a.iter().filter(|&&e| e != 0).count() <= 1;
        if !(deg == 0 || (deg == 2 && pure && c == c1)) {
            return None;
        }
    }
    Some((c1, v.coeff(&vec![0; n])))
}

fn basis(cfg: &ExperimentConfig, dim: usize, hbar: f64) -> Result<BasisSpec> {
    let p = &cfg.params;
    BasisSpec::with_trust(
        dim,
        hbar,
        req(&p.j_max, "j_max")?,
        req(&p.j_trust, "j_trust")?,
    )
}

pub fn spectrum(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let mut out = TaskOutput::default();
    let mut runs = Vec::new();
    let mut csv = String::from("hbar,index,label,E\n");
    let closed = isotropic_quadratic(v);
    for h in req(&cfg.params.hbar, "hbar")? {
        let b = basis(cfg, v.dim(), h)?;
        b.check_buffer(v.degree())?;
        let data = compute_spectrum(v, &b)?;
        let trusted = data.trusted();
        for (i, (e, j)) in trusted.iter().enumerate() {
            let label = j.map_or(String::new(), |j| j.to_string());
            csv.push_str(&format!("{h:.17e},{i},{label},{e:.17e}\n"));
        }
        if let Some((c1, c2)) = closed {
            let exact = quadratic_exact_spectrum(c1, c2, v.dim(), h, b.j_trust)?;
            let mut want: Vec<f64> = Vec::new();
            for (j, e) in exact.iter().enumerate() {
                want.extend(std::iter::repeat_n(*e, multiplicity(v.dim(), j as u32)));
            }
            let worst = trusted
                .iter()
                .zip(&want)
                .map(|((e, _), w)| (e - w).abs() / w.abs().max(h))
                .fold(0.0, f64::max);
            out.metric_max("closed_form_rel_error", worst);
        }
        runs.push(json!({"hbar": h, "basis": b, "trusted": trusted.iter().map(|t| t.0).collect::<Vec<_>>()}));
    }
    out.results = json!({ "spectra": runs });
    out.tables.push(("spectrum.csv".into(), csv));
    Ok(out)
}

pub fn cluster_task(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let hbars = req(&cfg.params.hbar, "hbar")?;
    let mut out = TaskOutput::default();
    let mut sets = Vec::new();
    for (i, &h) in hbars.iter().enumerate() {
        let b = basis(cfg, v.dim(), h)?;
        b.check_buffer(v.degree())?;
        let cs = clusters(&compute_spectrum(v, &b)?)?;
        for c in &cs.clusters {
            for m in &c.shifts {
                out.metric_max("shift_max", *m);
                out.metric_max("neg_shift_min", -m);
            }
        }
        let name = if hbars.len() == 1 {
            "clusters.csv".to_string()
        } else {
            format!("clusters_{i}.csv")
        };
        out.tables.push((name, cs.to_csv()));
        sets.push(cs);
    }
    if let Some(m) = out.metrics.remove("neg_shift_min") {
        out.metric("shift_min", -m);
    }
    let mut widths = Vec::new();
    if hbars.len() > 1 {
        let energy = req(&cfg.params.energy, "energy")?;
        widths = cluster_width_scan(v, energy, &hbars)?;
        out.metric("width_ratio_dev", 0.0);
        for k in 1..hbars.len() {
            let expected = (hbars[k] / hbars[k - 1]).powi(2);
            if widths[k - 1] > 0.0 {
                out.metric_max(
                    "width_ratio_dev",
                    (widths[k] / widths[k - 1] / expected - 1.0).abs(),
                );
            }
        }
    }
    out.results = json!({ "cluster_sets": sets, "widths": widths });
    Ok(out)
}

fn grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let g = req(&cfg.params.hbar_grid, "hbar_grid")?;
    Ok(geometric_grid(g.max, g.ratio, g.count))
}

fn weight(cfg: &ExperimentConfig) -> Result<WeightSpec> {
    req(&cfg.params.weight, "weight")
}

/// Quantum trace fits of `phi` against a classical value and the fitted
/// order it should match.
fn fit_against(
    cfg: &ExperimentConfig,
    phi: &PolyFn,
    rescale: bool,
    classical: f64,
    order: u32,
    out: &mut TaskOutput,
) -> Result<serde_json::Value> {
    let v = potential(cfg)?;
    let w = weight(cfg)?;
    let series = quantum_trace_series(v, &w, |s| phi.eval(s), &grid(cfg)?, rescale)?;
    let fit = expansion_fit(&series, &req(&cfg.params.fit_orders, "fit_orders")?)?;
    let c = fit.coefficient(order);
    let c0 = fit.coefficient(0);
    out.metric_max(&format!("c{order}_rel_error"), rel(c, classical));
    if order == 0 && fit.orders.contains(&1) {
        out.metric_max(
            "c1_over_c0",
            fit.coefficient(1).abs() / c0.abs().max(f64::MIN_POSITIVE),
        );
    }
    out.metric_max("fit_condition", fit.condition_number);
    out.metric_max("fit_residual", fit.residual);
    let idx = out.tables.len();
    out.tables
        .push((format!("series_{idx}.csv"), series.to_csv()));
    Ok(json!({"phi": phi, "classical": classical, "fit": fit}))
}

pub fn invariant_first(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let w = weight(cfg)?;
    let mut out = TaskOutput::default();
    let mut rows = Vec::new();
    for phi in phis(cfg)? {
        let classical = band_invariant_first(v, &w, &phi)?;
        rows.push(fit_against(cfg, &phi, false, classical, 0, &mut out)?);
    }
    out.results = json!({ "fits": rows });
    Ok(out)
}

pub fn invariant_second(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let w = weight(cfg)?;
    let l = req(&cfg.params.l, "l")?;
    let mut out = TaskOutput::default();
    let classical = second_invariant(v, &w, l, EnergyShift::Difference)?;
    let phi = PolyFn::power(l as usize + 1);
    let row = fit_against(cfg, &phi, false, classical, 2, &mut out)?;
    let first = band_invariant_first(v, &w, &phi)?;
    let fit = &row["fit"];
    let c0 = fit["coefficients"][0].as_f64().unwrap_or(f64::NAN);
    out.metric("c0_rel_error", rel(c0, first));
    out.results = json!({ "l": l, "second": row, "first_classical": first });
    Ok(out)
}

pub fn invariant_odd(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let w = weight(cfg)?;
    let mut out = TaskOutput::default();
    let mut rows = Vec::new();
    for phi in phis(cfg)? {
        let classical = odd_invariant(v, &w, &phi)?;
        rows.push(fit_against(cfg, &phi, true, classical, 0, &mut out)?);
    }
    out.metrics.remove("c1_over_c0");
    out.results = json!({ "fits": rows });
    Ok(out)
}

pub fn fit_expansion(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let w = weight(cfg)?;
    let mut out = TaskOutput::default();
    let mut rows = Vec::new();
    for (i, phi) in phis(cfg)?.into_iter().enumerate() {
        let series = quantum_trace_series(v, &w, |s| phi.eval(s), &grid(cfg)?, false)?;
        let fit = expansion_fit(&series, &req(&cfg.params.fit_orders, "fit_orders")?)?;
        if i == 0 {
            for (o, c) in fit.orders.iter().zip(&fit.coefficients) {
                out.metric(&format!("c{o}"), *c);
            }
            out.metric("fit_condition", fit.condition_number);
            out.metric("fit_residual", fit.residual);
        }
        out.tables
            .push((format!("series_{i}.csv"), series.to_csv()));
        rows.push(json!({"phi": phi, "fit": fit}));
    }
    out.results = json!({ "fits": rows });
    Ok(out)
}

pub fn szego(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let energy = req(&cfg.params.energy, "energy")?;
    let n_list = req(&cfg.params.n_list, "n_list")?;
    let mut out = TaskOutput::default();
    out.metric("gap_ratio_max", 0.0);
    out.metric("gap_increases", 0.0);
    let mut rows = Vec::new();
    let mut csv = String::from("phi,N,hbar,cluster_mean,sphere_value,gap\n");
    for (i, phi) in phis(cfg)?.into_iter().enumerate() {
        let pts = szego_compare(v, energy, |s| phi.eval(s), &n_list)?;
        for pt in &pts {
            csv.push_str(&format!(
                "{i},{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                pt.n, pt.hbar, pt.cluster_mean, pt.sphere_value, pt.gap
            ));
            out.metric_max("gap_max", pt.gap);
        }
        for w in pts.windows(2) {
            if w[0].gap > 0.0 {
                out.metric_max("gap_ratio_max", w[1].gap / w[0].gap);
            }
            if w[1].gap > w[0].gap {
                out.metric_max("gap_increases", out.metrics["gap_increases"] + 1.0);
            }
        }
        if let Some(last) = pts.last() {
            let s = last.sphere_value.abs();
            out.metric_max(
                "gap_last_rel",
                if last.gap == 0.0 { 0.0 } else { last.gap / s },
            );
            let m = out
                .metrics
                .get("sphere_abs_min")
                .copied()
                .unwrap_or(f64::INFINITY)
                .min(s);
            out.metric("sphere_abs_min", m);
        }
        rows.push(json!({"phi": phi, "points": pts}));
    }
    out.tables.push(("szego.csv".into(), csv));
    out.results = json!({ "energy": energy, "comparisons": rows });
    Ok(out)
}

//! Inverse-problem tasks, scored against the potential that generated the data.

use serde_json::json;

use super::config::{ExperimentConfig, Source};
use super::direct::potential;
use super::report::TaskOutput;
use crate::averaging::Potential;
use crate::error::{Error, Result};
use crate::inverse::{
    check_linear_class, recover_analytic_2d, recover_even_1d, recover_even_1d_from_oracle,
    recover_hessian, recover_linear_norm, recover_odd_1d, recover_semiclassical_2d,
    recover_separable, rigidity_svd, sphere_samples, ClassicalOracle, QuantumOracle, Recovered,
    RecoveryReport, SeparableOptions,
};
use crate::oscillator::separable_parts;

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Monomials even in every variable: the part circle averages can see.
fn visible_part(v: &Potential<f64>) -> Potential<f64> {
    let mut out = Potential::zero(v.dim());
    for (a, c) in v.terms().filter(|(a, _)| a.iter().all(|e| e % 2 == 0)) {
        out.add_term(a, c);
    }
    out
}

fn swapped(v: &Potential<f64>) -> Potential<f64> {
    let mut out = Potential::zero(2);
    for (a, c) in v.terms() {
        out.add_term(&[a[1], a[0]], c);
    }
    out
}

fn finish(mut out: TaskOutput, report: RecoveryReport) -> TaskOutput {
    for (k, v) in &report.residuals {
        out.metric(&format!("residual_{k}"), *v);
    }
    for (k, v) in &report.condition_numbers {
        out.metric(&format!("condition_{k}"), *v);
    }
    out.results = json!({ "report": report });
    out
}

fn profile_values(r: &RecoveryReport) -> Result<(&[f64], &[f64], Option<&Potential<f64>>)> {
    match &r.recovered {
        Recovered::Profile { s, values, fit } => Ok((s, values, fit.as_ref())),
        _ => Err(Error::InvalidArgument("expected a profile".into())),
    }
}

pub fn even_1d(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let p = &cfg.params;
    let (r_max, count, tol) = (
        p.r_max.unwrap_or(2.0),
        p.count.unwrap_or(401),
        p.tol.unwrap_or(1e-3),
    );
    let truth = visible_part(v);
    let mut out = TaskOutput::default();
    let report = match p.source.unwrap_or(Source::Classical) {
        Source::Classical => recover_even_1d_from_oracle(
            &ClassicalOracle::new(v.clone()),
            r_max,
            count,
            p.fit_degree,
            tol,
        )?,
        Source::Quantum => {
            let q = QuantumOracle::new(v.clone()).with_szego_n(p.szego_n.unwrap_or(80));
            let gq = sphere_samples(&q, r_max, count)?;
            let gc = sphere_samples(&ClassicalOracle::new(v.clone()), r_max, count)?;
            let rq = recover_even_1d(&gq, r_max, tol)?;
            let rc = recover_even_1d(&gc, r_max, tol)?;
            let szego_gap = max_gap(&gq, &gc);
            let profile_gap = max_gap(profile_values(&rq)?.1, profile_values(&rc)?.1);
            out.metric("szego_gap", szego_gap);
            out.metric("profile_gap", profile_gap);
            out.metric("gap_ratio", profile_gap / szego_gap.max(f64::MIN_POSITIVE));
            rq
        }
    };
    let (s, values, fit) = profile_values(&report)?;
    let exact: Vec<f64> = s.iter().map(|x| truth.eval(&[*x])).collect();
    out.metric("max_abs_error", max_gap(values, &exact));
    if let Some(f) = fit {
        out.metric("fit_coeff_error", f.max_abs_diff(&truth));
    }
    Ok(finish(out, report))
}

pub fn odd_1d(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let degree = cfg.params.degree.unwrap_or(5);
    let report = recover_odd_1d(&ClassicalOracle::new(v.clone()), degree)?;
    let Recovered::OddCoefficients { coefficients } = &report.recovered else {
        return Err(Error::InvalidArgument("expected odd coefficients".into()));
    };
    let want: Vec<f64> = (0..coefficients.len())
        .map(|i| v.coeff(&[2 * i as u32 + 1]))
        .collect();
    let neg: Vec<f64> = want.iter().map(|x| -x).collect();
    let mut out = TaskOutput::default();
    // recovery is up to x -> -x
    out.metric(
        "max_coeff_error",
        max_gap(coefficients, &want).min(max_gap(coefficients, &neg)),
    );
    Ok(finish(out, report))
}

/// Coefficients of the quadratic form of `v`, ascending.
fn quadratic_form_spectrum(v: &Potential<f64>) -> Vec<f64> {
    let h = v.hessian_at_origin();
    let n = h.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * h[i][j]);
    let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn hessian(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let oracle = ClassicalOracle::new(v.clone());
    let mut out = TaskOutput::default();
    match cfg.params.mode.as_deref().unwrap_or("hessian") {
        "hessian" => {
            let report = recover_hessian(&oracle)?;
            let Recovered::Multiset { values } = &report.recovered else {
                return Err(Error::InvalidArgument("expected a multiset".into()));
            };
            let mut got = values.clone();
            got.sort_by(f64::total_cmp);
            let want = match &cfg.params.expected {
                Some(e) => {
                    let mut e = e.clone();
                    e.sort_by(f64::total_cmp);
                    e
                }
                None => quadratic_form_spectrum(v),
            };
            if want.len() != got.len() {
                return Err(Error::DimensionMismatch {
                    left: want.len(),
                    right: got.len(),
                });
            }
            out.metric("max_abs_error", max_gap(&got, &want));
            Ok(finish(out, report))
        }
        "linear-norm" => {
            let report = recover_linear_norm(&oracle)?;
            let Recovered::Norm { value } = report.recovered else {
                return Err(Error::InvalidArgument("expected a norm".into()));
            };
            let want = match cfg.params.expected.as_deref() {
                Some([e, ..]) => *e,
                _ => v.gradient_at_origin().iter().map(|g| g * g).sum(),
            };
            out.metric("abs_error", (value - want).abs());
            Ok(finish(out, report))
        }
        _ => {
            let c = check_linear_class(&oracle)?;
            let admissible = f64::from(u8::from(c.admissible));
            out.metric("admissible", admissible);
            if let Some([e, ..]) = cfg.params.expected.as_deref() {
                out.metric("mismatch", (admissible - e).abs());
            }
            out.results = json!({ "class_check": c });
            Ok(out)
        }
    }
}

pub fn separable(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let p = &cfg.params;
    let d = SeparableOptions::default();
    let opts = SeparableOptions {
        rho_max: p.r_max.map_or(d.rho_max, |r| r * r),
        count: p.count.unwrap_or(d.count),
        moments: p.moments.unwrap_or(d.moments),
        degree: p.profile_degree.unwrap_or(d.degree),
        check_nodes: p.check_nodes.unwrap_or(d.check_nodes),
        tol: p.tol.unwrap_or(d.tol),
    };
    let report = recover_separable(&ClassicalOracle::new(v.clone()), &opts)?;
    let Recovered::Separable { rho, f1, f2, .. } = &report.recovered else {
        return Err(Error::InvalidArgument("expected separable profiles".into()));
    };
    let mut out = TaskOutput::default();
    if let Some((v1, v2)) = separable_parts(&visible_part(v)) {
        // each factor is known up to a shared constant and the labelling
        let curve = |w: &Potential<f64>| -> Vec<f64> {
            rho.iter()
                .map(|r| w.eval(&[r.sqrt()]) - w.eval(&[0.0]))
                .collect()
        };
        let rel0 = |g: &[f64]| -> Vec<f64> { g.iter().map(|x| x - g[0]).collect() };
        let (t1, t2, g1, g2) = (curve(&v1), curve(&v2), rel0(f1), rel0(f2));
        let direct = max_gap(&g1, &t1).max(max_gap(&g2, &t2));
        let crossed = max_gap(&g1, &t2).max(max_gap(&g2, &t1));
        out.metric("max_abs_error", direct.min(crossed));
    }
    Ok(finish(out, report))
}

pub fn analytic_2d(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let degree = cfg.params.degree.unwrap_or(4);
    let report = recover_analytic_2d(&ClassicalOracle::new(v.clone()), degree)?;
    let Recovered::Potential { potential: got } = &report.recovered else {
        return Err(Error::InvalidArgument("expected a potential".into()));
    };
    let truth = visible_part(&v.truncate(degree));
    let mut out = TaskOutput::default();
    out.metric(
        "max_coeff_error",
        got.max_abs_diff(&truth)
            .min(got.max_abs_diff(&swapped(&truth))),
    );
    Ok(finish(out, report))
}

pub fn semiclassical(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let fam = cfg
        .family
        .as_ref()
        .ok_or_else(|| Error::Config("missing family".into()))?;
    let degree = cfg.params.degree.unwrap_or(4);
    let orders = cfg
        .params
        .orders
        .unwrap_or(fam.orders.len().saturating_sub(1));
    let report =
        recover_semiclassical_2d(&ClassicalOracle::semiclassical(fam.clone()), degree, orders)?;
    let Recovered::Semiclassical { orders: got } = &report.recovered else {
        return Err(Error::InvalidArgument(
            "expected semiclassical orders".into(),
        ));
    };
    let zero = Potential::zero(2);
    let mut out = TaskOutput::default();
    out.metric("max_coeff_error", 0.0);
    for (k, g) in got.iter().enumerate() {
        let want = visible_part(&fam.orders.get(k).unwrap_or(&zero).truncate(degree));
        out.metric_max("max_coeff_error", g.max_abs_diff(&want));
    }
    Ok(finish(out, report))
}

pub fn rigidity(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = potential(cfg)?;
    let report = rigidity_svd(v, cfg.params.degree.unwrap_or(6))?;
    let Recovered::SingularValue { value } = report.recovered else {
        return Err(Error::InvalidArgument("expected a singular value".into()));
    };
    let mut out = TaskOutput::default();
    out.metric("sigma_min", value);
    Ok(finish(out, report))
}

//! Convention and identity audits that need no potential from the config.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::ExperimentConfig;
use super::report::TaskOutput;
use crate::averaging::{
    a0_apply, a0_invert, average_numeric, average_poly, b_r_apply, default_nodes, delta_average,
    gamma_coeff, r_n_decompose, Potential,
};
use crate::error::{Error, Result};
use crate::oscillator::{clusters, compute_spectrum, BasisSpec};
use crate::symbolcalc::{
    compositions, moyal_power_expansion, moyal_term, poisson_bracket, series_moyal,
    transport_symbols, ExpPolySymbol, PhasePolynomial, Symbol, DEFAULT_MAX_ORDER,
};

type P = PhasePolynomial<f64>;

pub fn run(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    match cfg.params.suite.as_deref() {
        Some("linear-anchor") => linear_anchor(cfg),
        Some("averaging-identities") => averaging_identities(cfg),
        Some("propagator") => propagator(),
        Some("fourier-laws") => fourier_laws(cfg),
        other => Err(Error::Config(format!("unknown suite {other:?}"))),
    }
}

/// `V = x`: the spectrum is the ladder shifted by `-hbar^4 / 2`.
fn linear_anchor(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let v = Potential::linear(1, 0, 1.0);
    let p = &cfg.params;
    let j_max = p.j_max.unwrap_or(400);
    let j_trust = p
        .j_trust
        .unwrap_or((f64::from(j_max) * crate::oscillator::TRUST_FRACTION) as u32);
    let mut out = TaskOutput::default();
    out.metric("eigen_error", 0.0);
    out.metric("shift_error", 0.0);
    for &h in p.hbar.as_deref().unwrap_or(&[0.2, 0.1, 0.05]) {
        let data = compute_spectrum(&v, &BasisSpec::with_trust(1, h, j_max, j_trust)?)?;
        for (j, (e, _)) in data.trusted().iter().enumerate() {
            out.metric_max("eigen_error", (e - (h * j as f64 - h.powi(4) / 2.0)).abs());
        }
        let cs = clusters(&data)?;
        for c in &cs.clusters {
            for m in &c.shifts {
                out.metric_max("shift_error", (m + h * h / 2.0).abs());
            }
        }
    }
    let d = delta_average(&v);
    out.metric("delta_error", d.max_abs_diff(&P::real_constant(1, -0.5)));
    out.results = json!({ "delta_average": d });
    Ok(out)
}

fn random_potential(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_deg: u32,
    terms: usize,
) -> Potential<f64> {
    let monos: Vec<Vec<u32>> = (0..=max_deg).flat_map(|d| compositions(dim, d)).collect();
    let mut v = Potential::zero(dim);
    for _ in 0..terms {
        let a = &monos[rng.gen_range(0..monos.len())];
        v.add_term(a, rng.gen_range(-1.0..1.0));
    }
    v
}

fn averaging_identities(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let p = &cfg.params;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.unwrap_or(7));
    let degree = p.degree.unwrap_or(8);
    let mut out = TaskOutput::default();
    for m in [
        "numeric_error",
        "odd_average_max",
        "h0_bracket_max",
        "w2_error",
    ] {
        out.metric(m, 0.0);
    }
    for i in 0..p.samples.unwrap_or(20) {
        let dim = 1 + i % 2;
        let v = random_potential(&mut rng, dim, degree, 6);
        let ave = average_poly(&v);
        for _ in 0..100 {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let exact = ave.eval(&x, &q);
            let numeric = average_numeric(|y| v.eval(y), &x, &q, default_nodes(v.degree()))?;
            out.metric_max(
                "numeric_error",
                (exact - Complex::new(numeric, 0.0)).norm() / numeric.abs().max(1.0),
            );
        }
        out.metric_max("odd_average_max", average_poly(&v.odd_part()).max_abs());
        out.metric_max(
            "h0_bracket_max",
            poisson_bracket(&P::h0(dim), &ave)?.max_abs(),
        );
    }
    for i in 0..10 {
        let v = random_potential(&mut rng, 1 + i % 2, 4, 4);
        let ts = transport_symbols(&v.to_phase(), 2, DEFAULT_MAX_ORDER)?;
        out.metric_max("w2_error", ts.w[2].max_abs_diff(&delta_average(&v)));
    }
    Ok(out)
}

fn propagator() -> Result<TaskOutput> {
    let mut out = TaskOutput::default();
    let i = Complex::new(0.0, 1.0);
    out.metric("b2_error", 0.0);
    for n in 1..=3 {
        for t in [0.3, 0.7, 1.9, -2.4] {
            let rate = Complex::new(0.0, t);
            let u0: Symbol<f64> = ExpPolySymbol::pure(n, rate).into();
            let Symbol::Exp(got) = moyal_term(&P::h0(n).into(), &u0, 2)? else {
                return Err(Error::InvalidArgument(
                    "expected an exponential symbol".into(),
                ));
            };
            let want =
                &P::h0(n).scale_real(t * t / 4.0) + &P::constant(n, -i * (n as f64 * t / 4.0));
            out.metric_max(
                "b2_error",
                got.prefactor
                    .max_abs_diff(&want)
                    .max((got.rate - rate).norm()),
            );
        }
    }
    // u2 = i e^{itH0} (t^3 H0/12 + n t^2/(8i) + t s2) with s2 = V + V^ave;
    // -i u2' = B2(H0, u0) + H0 u2 + u0 s2 reduces to an identity of prefactors.
    let quadratics = [
        Potential::from_terms(1, [(&[2u32][..], 0.5), (&[1][..], 1.0), (&[0][..], -0.3)])?,
        Potential::from_terms(
            2,
            [
                (&[2u32, 0][..], 0.5),
                (&[1, 1][..], -0.2),
                (&[0, 1][..], 0.7),
            ],
        )?,
        Potential::from_terms(2, [(&[0u32, 2][..], 1.5), (&[1, 0][..], -1.0)])?,
    ];
    out.metric("u2_ode_error", 0.0);
    for v in &quadratics {
        let n = v.dim();
        let s2 = &v.to_phase() + &average_poly(v);
        let h0 = P::h0(n);
        for t in [0.4, 1.3, 2.0] {
            let rate = Complex::new(0.0, t);
            let Symbol::Exp(b2) =
                moyal_term(&h0.clone().into(), &ExpPolySymbol::pure(n, rate).into(), 2)?
            else {
                return Err(Error::InvalidArgument(
                    "expected an exponential symbol".into(),
                ));
            };
            // prefactor derivative: t^2 H0/4 + n t/(4i) + s2
            let dpre = &(&h0.scale_real(t * t / 4.0)
                + &P::constant(n, Complex::new(n as f64 * t / 4.0, 0.0) / i))
                + &s2;
            let rhs = &b2.prefactor + &s2;
            out.metric_max("u2_ode_error", dpre.max_abs_diff(&rhs));
        }
    }
    out.metric("power_error", 0.0);
    let x = P::x(1, 0);
    let q = P::p(1, 0);
    let w0 = &(&x.pow(2).scale_real(0.7) + &(&x * &q)) + &q.scale_real(-0.4);
    let w2 = &q.pow(2) + &x.scale_real(1.5);
    let series = vec![w0.clone(), P::zero(1), w2.clone()];
    let mut power = series.clone();
    for l in 0..=3u32 {
        if l > 0 {
            power = series_moyal(&power, &series, 2)?;
        }
        let (lead, second) = moyal_power_expansion(&w0, &w2, l)?;
        let scale = lead.max_abs().max(second.max_abs()).max(1.0);
        let err = power[0]
            .max_abs_diff(&lead)
            .max(power[1].max_abs())
            .max(power[2].max_abs_diff(&second));
        out.metric_max("power_error", err / scale);
    }
    Ok(out)
}

fn fourier_laws(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    let kmax = cfg.params.degree.unwrap_or(10);
    let mut out = TaskOutput::default();
    // (1/2pi) int cos^{2k} e^{-2ir theta}, exact under the trapezoid rule
    let angular = |k: u32, r: i32| {
        let m = 4 * (kmax as usize + 2);
        (0..m)
            .map(|s| {
                let th = 2.0 * std::f64::consts::PI * s as f64 / m as f64;
                th.cos().powi(2 * k as i32) * (2.0 * f64::from(r) * th).cos()
            })
            .sum::<f64>()
            / m as f64
    };
    out.metric("b_r_error", 0.0);
    for k in 0..=kmax {
        for r in -10..=10 {
            let got = b_r_apply(&Potential::monomial(1, &[2 * k], 1.0), r)?.coeff(&[2 * k]);
            out.metric_max("b_r_error", (got - angular(k, r)).abs());
        }
    }
    out.metric("tensor_error", 0.0);
    for k in 0..=6 {
        for l in 0..=6 {
            let comps = r_n_decompose(&Potential::monomial(2, &[2 * k, 2 * l], 1.0))?;
            for r in -6..=6 {
                let want = angular(k, r) * angular(l, r);
                let got = comps
                    .get(&r)
                    .map_or(0.0, |c| c.coeff(&[2 * k, 2 * l], &[0, 0]).re);
                out.metric_max("tensor_error", (got - want).abs());
            }
        }
    }
    out.metric("gamma_monotone_violations", 0.0);
    out.metric("gamma_gap_excess", f64::NEG_INFINITY);
    let scaled = |k: u32| gamma_coeff(k, 0) * (std::f64::consts::PI * f64::from(k)).sqrt();
    for k in 4..=400 {
        if scaled(k + 1) <= scaled(k) {
            out.metric_max(
                "gamma_monotone_violations",
                out.metrics["gamma_monotone_violations"] + 1.0,
            );
        }
        out.metric_max(
            "gamma_gap_excess",
            (1.0 - scaled(k)) - 1.0 / (4.0 * f64::from(k)),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut g = Potential::zero(2);
    for k in 0..=kmax / 2 {
        for l in 0..=kmax / 2 {
            g.add_term(&[2 * k, 2 * l], rng.gen_range(-1.0..1.0));
        }
    }
    let back = a0_apply(&a0_invert(&g)?)?;
    out.metric("a0_roundtrip_error", back.max_abs_diff(&g));
    Ok(out)
}

mod common;

use common::pot;
use oscbands::inverse::*;

fn profile(r: &RecoveryReport) -> (&[f64], &[f64], Option<&oscbands::Pot>) {
    match &r.recovered {
        Recovered::Profile { s, values, fit } => (s, values, fit.as_ref()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn even_1d_quadratic_and_quartic() {
    for v in [pot(1, &[(&[2], 1.0)]), pot(1, &[(&[2], 1.0), (&[4], 0.5)])] {
        let oracle = ClassicalOracle::new(v.clone());
        let rep = recover_even_1d_from_oracle(&oracle, 2.0, 401, Some(4), 1e-3).unwrap();
        let (s, vals, fit) = profile(&rep);
        let err = s
            .iter()
            .zip(vals)
            .map(|(x, y)| (v.eval(&[*x]) - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "max error {err}");
        let fit = fit.unwrap();
        for e in [0u32, 2, 4] {
            assert!((fit.coeff(&[e]) - v.coeff(&[e])).abs() < 1e-3);
        }
    }
}

#[test]
fn even_1d_coarse_grid_rejected() {
    let oracle = ClassicalOracle::new(pot(1, &[(&[2], 1.0), (&[8], 1.0)]));
    assert!(recover_even_1d_from_oracle(&oracle, 2.0, 5, None, 1e-6).is_err());
}

fn odd_coefficients(r: &RecoveryReport) -> Vec<f64> {
    match &r.recovered {
        Recovered::OddCoefficients { coefficients } => coefficients.clone(),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn odd_1d_examples() {
    let cases: [(&[(&[u32], f64)], [f64; 3]); 2] = [
        (&[(&[1], 1.0), (&[3], 0.3), (&[5], -0.1)], [1.0, 0.3, -0.1]),
        (&[(&[3], 1.0), (&[5], -0.2)], [0.0, 1.0, -0.2]),
    ];
    for (terms, want) in cases {
        for sign in [1.0, -1.0] {
            let v = pot(1, terms).scale(sign);
            let rep = recover_odd_1d(&ClassicalOracle::new(v), 5).unwrap();
            let got = odd_coefficients(&rep);
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-6, "{got:?} vs {want:?}");
            }
            assert!(rep.flags.sign);
        }
    }
}

#[test]
fn odd_1d_rejects_even_potential() {
    assert!(recover_odd_1d(&ClassicalOracle::new(pot(1, &[(&[2], 1.0)])), 3).is_err());
}

fn multiset(r: &RecoveryReport) -> Vec<f64> {
    match &r.recovered {
        Recovered::Multiset { values } => values.clone(),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn hessian_of_diagonal_form() {
    let v = pot(
        2,
        &[
            (&[2, 0], 1.0),
            (&[0, 2], 3.0),
            (&[4, 0], 1.0),
            (&[1, 3], -0.5),
            (&[0, 0], 0.7),
        ],
    );
    let rep = recover_hessian(&ClassicalOracle::new(v)).unwrap();
    let a = multiset(&rep);
    assert!(
        (a[0] - 1.0).abs() < 1e-8 && (a[1] - 3.0).abs() < 1e-8,
        "{a:?}"
    );
    assert!(rep.flags.rotation);
    assert!(rep.max_residual() < 1e-8);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
    #[test]
    fn hessian_is_rotation_invariant(a in 0.2f64..4.0, b in 0.2f64..4.0, theta in 0.0f64..6.28) {
        let v = pot(2, &[(&[2, 0], a), (&[0, 2], b), (&[3, 1], 0.3)]);
        let w = gauge_move(&v, &GaugeMove::Rotation { angle: theta }).unwrap();
        let got = multiset(&recover_hessian(&ClassicalOracle::new(w)).unwrap());
        let (lo, hi) = (a.min(b), a.max(b));
        proptest::prop_assert!((got[0] - lo).abs() < 1e-7 && (got[1] - hi).abs() < 1e-7, "{:?} vs {} {}", got, lo, hi);
    }
}

#[test]
fn hessian_double_root_and_generating_value() {
    let rep = recover_hessian(&ClassicalOracle::new(pot(
        2,
        &[(&[2, 0], 0.7), (&[0, 2], 0.7)],
    )))
    .unwrap();
    let a = multiset(&rep);
    assert!(
        (a[0] - 0.7).abs() < 1e-6 && (a[1] - 0.7).abs() < 1e-6,
        "{a:?}"
    );
    // sum_k int e^{-5|z|^2} (|z_1|^2 + 3|z_2|^2)^k / k! = pi^2 / ((5-1)(5-3))
    let oracle = ClassicalOracle::new(pot(2, &[(&[2, 0], 2.0), (&[0, 2], 6.0)]));
    let w = oscbands::invariants::WeightSpec::gaussian(10.0).unwrap();
    let mut total = 0.0;
    let mut fact = 1.0;
    for k in 0..50usize {
        if k > 0 {
            fact *= k as f64;
        }
        total += oracle
            .first(&w, &oscbands::invariants::PolyFn::power(k))
            .unwrap()
            / fact;
    }
    let want = std::f64::consts::PI.powi(2) / 8.0;
    assert!((total - want).abs() < 1e-9 * want, "{total} vs {want}");
}

#[test]
fn linear_norm_examples() {
    let tail = pot(
        2,
        &[
            (&[1, 0], 2.0),
            (&[0, 0], 0.4),
            (&[3, 0], 0.5),
            (&[1, 2], -0.3),
            (&[6, 0], 0.2),
            (&[2, 4], 0.1),
        ],
    );
    for (v, want) in [
        (tail, 4.0),
        (pot(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]), 2.0),
        (pot(1, &[]), 0.0),
    ] {
        let rep = recover_linear_norm(&ClassicalOracle::new(v)).unwrap();
        match rep.recovered {
            Recovered::Norm { value } => assert!((value - want).abs() < 1e-6, "{value} vs {want}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn linear_class_check_on_labeled_corpus() {
    let corpus: [(&[(&[u32], f64)], bool); 10] = [
        (&[(&[1, 0], 1.0)], true),
        (&[(&[1, 0], 1.0), (&[3, 0], 2.0)], true),
        (&[(&[0, 0], 5.0), (&[0, 1], -1.0), (&[6, 0], 1.0)], true),
        (&[(&[2, 1], 1.0), (&[1, 4], 1.0), (&[3, 3], -2.0)], true),
        (&[], true),
        (&[(&[2, 0], 1.0)], false),
        (&[(&[1, 1], 0.1), (&[1, 0], 1.0)], false),
        (&[(&[4, 0], 1.0), (&[1, 0], 1.0)], false),
        (&[(&[2, 2], -0.5), (&[6, 0], 1.0)], false),
        (&[(&[0, 0], 1.0), (&[3, 1], 1e-3)], false),
    ];
    for (terms, want) in corpus {
        let check = check_linear_class(&ClassicalOracle::new(pot(2, terms))).unwrap();
        assert_eq!(check.admissible, want, "{terms:?}: {check:?}");
    }
}

fn separable_error(
    v: oscbands::Pot,
    rho_max: f64,
    f1: impl Fn(f64) -> f64,
    f2: impl Fn(f64) -> f64,
) -> f64 {
    let opts = SeparableOptions {
        rho_max,
        ..SeparableOptions::default()
    };
    let rep = recover_separable(&ClassicalOracle::new(v), &opts).unwrap();
    assert!(rep.flags.swap && rep.flags.constant_split);
    let Recovered::Separable {
        rho,
        f1: g1,
        f2: g2,
        ..
    } = &rep.recovered
    else {
        panic!("unexpected report")
    };
    let err = |a: &[f64], b: &[f64]| {
        rho.iter()
            .zip(a.iter().zip(b))
            .map(|(r, (x, y))| (f1(*r) - x).abs().max((f2(*r) - y).abs()))
            .fold(0.0, f64::max)
    };
    // the labelling of the two factors is not determined
    err(g1, g2).min(
        rho.iter()
            .zip(g1.iter().zip(g2))
            .map(|(r, (x, y))| (f2(*r) - x).abs().max((f1(*r) - y).abs()))
            .fold(0.0, f64::max),
    )
}

#[test]
fn separable_linear_profiles() {
    let e = separable_error(
        pot(2, &[(&[2, 0], 1.0), (&[0, 2], 2.0)]),
        1.0,
        |s| s,
        |s| 2.0 * s,
    );
    assert!(e < 1e-2, "error {e}");
}

#[test]
fn separable_quadratic_and_linear() {
    let e = separable_error(
        pot(2, &[(&[4, 0], 1.0), (&[0, 2], 1.0)]),
        0.56,
        |s| s * s,
        |s| s,
    );
    assert!(e < 1e-2, "error {e}");
}

#[test]
fn separable_equal_factors_rejected() {
    for v in [
        pot(2, &[(&[4, 0], 1.0), (&[0, 4], 1.0)]),
        pot(2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)]),
    ] {
        let err =
            recover_separable(&ClassicalOracle::new(v), &SeparableOptions::default()).unwrap_err();
        assert!(matches!(err, oscbands::Error::Genericity(_)), "{err}");
    }
}

fn recovered_potential(r: &RecoveryReport) -> oscbands::Pot {
    match &r.recovered {
        Recovered::Potential { potential } => potential.clone(),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn analytic_2d_examples() {
    let quartic = pot(
        2,
        &[
            (&[2, 0], 1.0),
            (&[0, 2], 3.0),
            (&[4, 0], 1.0),
            (&[2, 2], 1.0),
        ],
    );
    let sextic = pot(
        2,
        &[
            (&[0, 0], 0.3),
            (&[2, 0], 1.0),
            (&[0, 2], 3.0),
            (&[4, 0], 1.0),
            (&[2, 2], 1.0),
            (&[0, 6], 0.4),
            (&[2, 4], -0.2),
            (&[6, 0], 0.1),
        ],
    );
    for (v, d) in [(quartic, 4), (sextic, 6)] {
        let rep = recover_analytic_2d(&ClassicalOracle::new(v.clone()), d).unwrap();
        let got = recovered_potential(&rep);
        assert!(got.max_abs_diff(&v) < 1e-6, "{got:?}");
        assert!(rep.flags.rotation);
    }
}

#[test]
fn analytic_2d_quadratic_only_and_degenerate() {
    let v = pot(2, &[(&[2, 0], 0.5), (&[0, 2], 2.0)]);
    let got =
        recovered_potential(&recover_analytic_2d(&ClassicalOracle::new(v.clone()), 8).unwrap());
    assert!(got.max_abs_diff(&v) < 1e-8);
    let deg = pot(2, &[(&[2, 0], 1.0), (&[0, 2], 1.0), (&[4, 0], 1.0)]);
    let err = recover_analytic_2d(&ClassicalOracle::new(deg), 4).unwrap_err();
    assert!(matches!(err, oscbands::Error::RankDeficient(_)), "{err}");
}

#[test]
fn semiclassical_2d_examples() {
    let v0 = pot(2, &[(&[2, 0], 1.0), (&[0, 2], 3.0)]);
    let fam = oscbands::SemiclassicalPotential::new(vec![
        v0.clone(),
        pot(2, &[(&[4, 0], 1.0)]),
        pot(2, &[(&[0, 2], 1.0)]),
    ])
    .unwrap();
    let rep = recover_semiclassical_2d(&ClassicalOracle::semiclassical(fam.clone()), 4, 2).unwrap();
    let Recovered::Semiclassical { orders } = &rep.recovered else {
        panic!("unexpected report")
    };
    for (got, want) in orders.iter().zip(&fam.orders) {
        assert!(got.max_abs_diff(want) < 1e-6, "{got:?} vs {want:?}");
    }
    // vanishing corrections and invisible odd parts
    let odd = pot(
        2,
        &[
            (&[1, 0], 1.0),
            (&[3, 0], 1.0),
            (&[1, 2], 2.0),
            (&[2, 2], 0.5),
        ],
    );
    let fam = oscbands::SemiclassicalPotential::new(vec![v0.clone(), pot(2, &[]), odd]).unwrap();
    let rep = recover_semiclassical_2d(&ClassicalOracle::semiclassical(fam), 4, 2).unwrap();
    let Recovered::Semiclassical { orders } = &rep.recovered else {
        panic!("unexpected report")
    };
    assert!(orders[1].max_abs_diff(&pot(2, &[])) < 1e-8);
    assert!(
        orders[2].max_abs_diff(&pot(2, &[(&[2, 2], 0.5)])) < 1e-6,
        "{:?}",
        orders[2]
    );
    assert!(rep.flags.odd_part);
}

fn singular_value(r: &RecoveryReport) -> f64 {
    match r.recovered {
        Recovered::SingularValue { value } => value,
        ref other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rigidity_examples() {
    let generic =
        singular_value(&rigidity_svd(&pot(2, &[(&[2, 0], 1.0), (&[0, 2], 3.0)]), 6).unwrap());
    let degenerate =
        singular_value(&rigidity_svd(&pot(2, &[(&[2, 0], 2.0), (&[0, 2], 2.0)]), 6).unwrap());
    let constants =
        singular_value(&rigidity_svd(&pot(2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)]), 0).unwrap());
    assert!(generic > 1e-8, "{generic:e}");
    assert!(degenerate < 1e-12, "{degenerate:e}");
    assert!(constants > 0.5);
    assert!(rigidity_svd(&pot(2, &[(&[1, 1], 1.0)]), 4).is_err());
}

#[test]
fn quantum_even_1d_within_abel_amplification() {
    let v = pot(1, &[(&[2], 1.0), (&[4], 0.5)]);
    let (count, r_max) = (101, 2.0);
    let gq = sphere_samples(&QuantumOracle::new(v.clone()), r_max, count).unwrap();
    let gc = sphere_samples(&ClassicalOracle::new(v), r_max, count).unwrap();
    let gap = gq
        .iter()
        .zip(&gc)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let rq = recover_even_1d(&gq, r_max, 1e-2).unwrap();
    let rc = recover_even_1d(&gc, r_max, 1e-2).unwrap();
    let diff = profile(&rq)
        .1
        .iter()
        .zip(profile(&rc).1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    // a data error c_k r^{2k} inverts to c_k x^{2k} / gamma_k; gamma_2 = 3/8
    assert!(gap < 0.05, "Szego gap {gap:e}");
    assert!(
        diff <= 8.0 / 3.0 * gap,
        "profile gap {diff:e} vs Szego gap {gap:e}"
    );
}

#[test]
fn gauge_rotation_and_translation() {
    use oscbands::invariants::{PolyFn, WeightSpec};
    let v = pot(2, &[(&[2, 0], 1.0), (&[0, 2], 2.0)]);
    let r = gauge_move(
        &v,
        &GaugeMove::Rotation {
            angle: std::f64::consts::FRAC_PI_2,
        },
    )
    .unwrap();
    assert!(r.max_abs_diff(&pot(2, &[(&[2, 0], 2.0), (&[0, 2], 1.0)])) < 1e-14);
    let w = WeightSpec::gaussian(0.7).unwrap();
    let generic = pot(
        2,
        &[
            (&[1, 0], 0.5),
            (&[2, 0], 1.0),
            (&[0, 2], 2.0),
            (&[3, 1], 0.2),
            (&[0, 4], -0.1),
        ],
    );
    let moved = gauge_move(&generic, &GaugeMove::Rotation { angle: 0.37 }).unwrap();
    let (o1, o2) = (
        ClassicalOracle::new(generic.clone()),
        ClassicalOracle::new(moved.clone()),
    );
    for k in 1..4 {
        let (a, b) = (
            o1.first(&w, &PolyFn::power(k)).unwrap(),
            o2.first(&w, &PolyFn::power(k)).unwrap(),
        );
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
    let (s1, s2) = (o1.second(&w, 1).unwrap(), o2.second(&w, 1).unwrap());
    assert!((s1 - s2).abs() < 1e-10 * s1.abs().max(1.0));
    let g = |p: &oscbands::Pot| p.gradient_at_origin().iter().map(|x| x * x).sum::<f64>();
    assert!((g(&generic) - g(&moved)).abs() < 1e-14);
    assert!((generic.eval(&[0.0, 0.0]) - moved.eval(&[0.0, 0.0])).abs() < 1e-14);
    assert!(gauge_move(
        &v,
        &GaugeMove::Orthogonal {
            matrix: vec![vec![1.0, 0.0], vec![0.5, 1.0]]
        }
    )
    .is_err());
    assert_eq!(
        gauge_move(&v, &GaugeMove::Rotation { angle: 0.0 })
            .unwrap()
            .max_abs_diff(&v),
        0.0
    );
}

#[test]
fn translated_family_is_isospectral() {
    use oscbands::oscillator::{compute_spectrum, BasisSpec};
    let v = pot(1, &[(&[2], 0.3)]);
    let fam = oscbands::SemiclassicalPotential::new(vec![v]).unwrap();
    let moved = gauge_moves(&fam, &GaugeMove::Translation { b: vec![0.4] }).unwrap();
    let hbar = 0.1;
    let basis = BasisSpec::new(1, hbar, 120).unwrap();
    let e0 = compute_spectrum(&fam.at_hbar(hbar), &basis).unwrap();
    let e1 = compute_spectrum(&moved.at_hbar(hbar), &basis).unwrap();
    for j in 0..=20 {
        assert!(
            (e0.eigenvalues[j] - e1.eigenvalues[j]).abs() < 1e-10,
            "level {j}"
        );
    }
}

#[test]
fn laurent_fit_matches_exact_expansion() {
    use oscbands::invariants::{PolyFn, WeightSpec};
    let v = pot(2, &[(&[2, 0], 1.0), (&[0, 2], 3.0), (&[4, 0], 0.5)]);
    let oracle = ClassicalOracle::new(v);
    let phi = PolyFn::power(2);
    let exact = oracle.first_expansion(&phi, -8, -2).unwrap();
    let fitted = fit_laurent(
        |mu| oracle.first(&WeightSpec::gaussian(mu).unwrap(), &phi),
        -8,
        -2,
    )
    .unwrap();
    for p in -8..=-2 {
        let (a, b) = (exact.coefficient(p), fitted.coefficient(p));
        assert!(
            (a - b).abs() < 1e-6 * a.abs().max(1.0),
            "power {p}: {a} vs {b}"
        );
    }
}

mod common;

use std::collections::BTreeMap;

use common::{delta_quadrature, pot, potential};
use nalgebra::DMatrix;
use oscbands::averaging::*;
use oscbands::symbolcalc::{compositions, poisson_bracket, PhasePolynomial};
use oscbands::{PhasePoly, Pot};
use proptest::prelude::*;

fn re_at(p: &PhasePoly, x: &[f64], q: &[f64]) -> f64 {
    p.eval(x, q).re
}

#[test]
fn quadratic_average_is_h0() {
    let v = pot(1, &[(&[2], 1.0)]);
    assert!(average_poly(&v).approx_eq(&PhasePoly::h0(1), 1e-15));
    let num = average_numeric(|x: &[f64]| x[0] * x[0], &[1.0], &[0.0], 64).unwrap();
    assert!((num - 0.5).abs() < 1e-15);
}

#[test]
fn odd_average_vanishes() {
    assert!(average_poly(&pot(1, &[(&[3], 1.0)])).is_zero());
    assert!(average_poly(&pot(2, &[(&[2, 1], 1.0), (&[0, 1], 2.0)])).is_zero());
    let num = average_numeric(|x: &[f64]| x[0].powi(3) - x[0], &[0.7], &[-1.2], 32).unwrap();
    assert!(num.abs() < 1e-14);
}

#[test]
fn product_of_squares_in_two_dimensions() {
    // diagonal part |z1|^2 |z2|^2 / 4 plus (z1^2 zbar2^2 + c.c.) / 16
    let v = pot(2, &[(&[2, 2], 1.0)]);
    let a = average_poly(&v);
    assert!((a.coeff(&[2, 2], &[0, 0]).re - 3.0 / 8.0).abs() < 1e-15);
    assert!((a.coeff(&[0, 0], &[2, 2]).re - 3.0 / 8.0).abs() < 1e-15);
    assert!((a.coeff(&[2, 0], &[0, 2]).re - 1.0 / 8.0).abs() < 1e-15);
    assert!((a.coeff(&[1, 1], &[1, 1]).re - 0.5).abs() < 1e-15);
    for (x, p) in [([0.3, 1.2], [-0.5, 0.8]), ([1.5, -0.1], [0.2, 0.9])] {
        let num = average_numeric(|y: &[f64]| y[0] * y[0] * y[1] * y[1], &x, &p, 32).unwrap();
        assert!((re_at(&a, &x, &p) - num).abs() < 1e-13);
    }
}

#[test]
fn general_symbol_average_commutes_with_h0() {
    let a = &(&PhasePoly::x(1, 0).pow(3) * &PhasePoly::p(1, 0)) + &PhasePoly::p(1, 0).pow(2);
    let ave = average_symbol(&a);
    assert!(poisson_bracket(&PhasePoly::h0(1), &ave).unwrap().max_abs() < 1e-13);
    // x^3 p has no z^2 zbar^2 part, p^2 averages to H0
    assert!(ave.approx_eq(&PhasePoly::h0(1), 1e-13));
}

#[test]
fn numeric_average_argument_checks() {
    assert!(average_numeric(|x: &[f64]| x[0], &[1.0], &[0.0], 8).is_err());
    let r = average_numeric(|x: &[f64]| 1.0 / (x[0] - 1.0), &[1.0], &[0.0], 16);
    assert!(matches!(r, Err(oscbands::Error::NonFinite(_))));
    assert_eq!(default_nodes(4), 16);
    assert_eq!(default_nodes(6), 20);
}

#[test]
fn bounded_potential_average_decays_like_inverse_radius() {
    // exact: (1/2pi) int ds / (1 + r^2 cos^2 s) = 1 / sqrt(1 + r^2)
    let f = |x: &[f64]| 1.0 / (1.0 + x[0] * x[0]);
    for r in [10.0, 100.0, 1000.0] {
        let avg = average_numeric_converged(f, &[r], &[0.0], 64, 1e-10).unwrap();
        assert!((avg * (1.0 + r * r).sqrt() - 1.0).abs() < 1e-8);
        assert!(avg * r > 0.99);
    }
}

#[test]
fn delta_average_of_linear_potential() {
    let d = delta_average(&pot(1, &[(&[1], 1.0)]));
    assert!(d.approx_eq(&PhasePoly::real_constant(1, -0.5), 1e-14));
    let oracle = delta_quadrature(|_| 1.0, 0.4, -0.9);
    assert!((oracle + 0.5).abs() < 1e-10);
}

#[test]
fn delta_average_of_constant_vanishes() {
    assert!(delta_average(&pot(2, &[(&[0, 0], 3.0)])).is_zero());
}

#[test]
fn delta_average_of_quadratic_against_quadrature() {
    let d = delta_average(&pot(1, &[(&[2], 1.0)]));
    for (x, p) in [(0.5, 0.0), (0.3, -1.1), (1.4, 0.7)] {
        let oracle = delta_quadrature(|y| 2.0 * y, x, p);
        assert!((re_at(&d, &[x], &[p]) - oracle).abs() < 1e-9, "{x},{p}");
    }
    assert!(d.max_imag() < 1e-14);
}

#[test]
fn delta_average_of_cubic_against_quadrature() {
    let v = pot(1, &[(&[3], 1.0), (&[1], -0.5)]);
    let d = delta_average(&v);
    assert!(poisson_bracket(&PhasePoly::h0(1), &d).unwrap().max_abs() < 1e-12);
    for (x, p) in [(0.5, 0.2), (-0.8, 1.0)] {
        let oracle = delta_quadrature(|y| 3.0 * y * y - 0.5, x, p);
        assert!((re_at(&d, &[x], &[p]) - oracle).abs() < 1e-9);
    }
}

#[test]
fn b_r_examples() {
    let x2 = pot(1, &[(&[2], 1.0)]);
    assert_eq!(b_r_apply(&x2, 0).unwrap(), pot(1, &[(&[2], 0.5)]));
    assert!(b_r_apply(&x2, 2).unwrap().is_zero());
    assert_eq!(
        b_r_apply(&pot(1, &[(&[4], 1.0)]), 1).unwrap(),
        pot(1, &[(&[4], 0.25)])
    );
    assert!(b_r_apply(&pot(1, &[(&[3], 1.0)]), 0).is_err());
}

#[test]
fn gamma_examples() {
    assert_eq!(gamma_coeff(1, 0), 0.5);
    assert_eq!(gamma_coeff(2, 3), 0.0);
    assert_eq!(gamma_coeff(2, -3), 0.0);
    // C(20, 10) / 4^10
    let exact = 184756.0 / 1048576.0;
    assert!((gamma_coeff(10, 0) - exact).abs() < 1e-15);
    let gap = (gamma_coeff(10, 0) - gamma_asymptotic(10, 0)).abs() / gamma_coeff(10, 0);
    // 1 - sqrt(pi k) gamma_k ~ 1/(8k)
    assert!(gap < 0.02 && gap > 0.005);
    let g100 = (gamma_coeff(100, 0) - gamma_asymptotic(100, 0)).abs() / gamma_coeff(100, 0);
    assert!(g100 < gap / 5.0);
}

#[test]
fn fourier_components_examples() {
    let v = pot(2, &[(&[2, 2], 1.0)]);
    let comps = r_n_decompose(&v).unwrap();
    let mono = |c: f64| PhasePoly::monomial(2, &[2, 2], &[0, 0], num_complex::Complex::new(c, 0.0));
    assert!(comps[&0].approx_eq(&mono(0.25), 1e-15));
    assert!(comps[&1].approx_eq(&mono(1.0 / 16.0), 1e-15));
    assert!(comps[&-1].approx_eq(&comps[&1].conj(), 1e-15));
    let sep = r_n_decompose(&pot(2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)])).unwrap();
    assert_eq!(sep.keys().copied().collect::<Vec<_>>(), vec![0]);
    assert!(r_n_decompose(&pot(2, &[(&[1, 2], 1.0)])).is_err());
}

#[test]
fn fourier_components_reassemble_the_average() {
    let v = pot(
        2,
        &[
            (&[4, 2], 1.0),
            (&[2, 2], -0.5),
            (&[0, 6], 0.3),
            (&[2, 0], 2.0),
        ],
    );
    let ave = average_poly(&v);
    let comps = r_n_decompose(&v).unwrap();
    let (rho1, rho2, t1, t2) = (0.8f64, 1.3f64, 0.4f64, -1.1f64);
    let x = [rho1 * t1.cos(), rho2 * t2.cos()];
    let p = [rho1 * t1.sin(), rho2 * t2.sin()];
    let mut sum = num_complex::Complex::new(0.0, 0.0);
    for (r, a) in &comps {
        let phase = num_complex::Complex::new(0.0, 2.0 * f64::from(*r) * (t1 - t2)).exp();
        sum += a.eval(&[rho1, rho2], &[0.0, 0.0]) * phase;
    }
    assert!((sum - ave.eval(&x, &p)).norm() < 1e-13);
    for r in comps.keys() {
        assert!(4 * r.unsigned_abs() <= v.degree());
    }
}

#[test]
fn a0_inverse_examples() {
    let g = pot(2, &[(&[2, 2], 0.25)]);
    assert_eq!(a0_invert(&g).unwrap(), pot(2, &[(&[2, 2], 1.0)]));
    let c = pot(2, &[(&[0, 0], 3.5)]);
    assert_eq!(a0_invert(&c).unwrap(), c);
}

#[test]
fn locality_on_balls() {
    // V2 = V1 + (x/2)^40 differs from V1 by at most 2^-40 on |x| <= 1
    let v1 = pot(1, &[(&[2], 1.0), (&[3], -0.4)]);
    let v2 = v1.add(&pot(1, &[(&[40], 0.5f64.powi(40))])).unwrap();
    let (a1, a2) = (average_poly(&v1), average_poly(&v2));
    for (x, p) in [(0.5, 0.5), (-0.7, 0.7), (0.0, 1.0)] {
        assert!((a1.eval(&[x], &[p]) - a2.eval(&[x], &[p])).norm() < 1e-11);
    }
    assert!((a1.eval(&[3.0], &[0.0]) - a2.eval(&[3.0], &[0.0])).norm() > 1.0);
}

fn even_monomials(dim: usize, max_deg: u32) -> Vec<Vec<u32>> {
    (0..=max_deg / 2)
        .flat_map(|h| compositions(dim, 2 * h))
        .collect()
}

#[test]
fn averaging_is_injective_on_even_polynomials() {
    let monos = even_monomials(2, 10);
    let mut rows: BTreeMap<(Vec<u32>, Vec<u32>), usize> = BTreeMap::new();
    let cols: Vec<PhasePoly> = monos
        .iter()
        .map(|a| average_poly(&Pot::monomial(2, a, 1.0)))
        .collect();
    for c in &cols {
        for (m, _) in c.terms() {
            let len = rows.len();
            rows.entry((m.x_exps(2), m.p_exps(2))).or_insert(len);
        }
    }
    let mut mat = DMatrix::<f64>::zeros(rows.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (m, v) in c.terms() {
            mat[(rows[&(m.x_exps(2), m.p_exps(2))], j)] = v.re;
        }
    }
    let sv = mat.singular_values();
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min > 1e-6, "smallest singular value {min}");
    for h in 0..5 {
        for a in compositions(2, 2 * h + 1) {
            assert!(average_poly(&Pot::monomial(2, &a, 1.0)).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn average_is_flow_invariant(v in potential(2, 8, 6)) {
        let a = average_poly(&v);
        prop_assert!(poisson_bracket(&PhasePoly::h0(2), &a).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn average_preserves_homogeneity(v in potential(2, 6, 5), deg in 0u32..=6) {
        let h = v.homogeneous_part(deg);
        let a = average_poly(&h);
        prop_assert!(a.terms().all(|(m, _)| m.degree() == deg));
    }

    #[test]
    fn numeric_average_matches_closed_form(v in potential(2, 8, 6), x in prop::array::uniform2(-1.5f64..1.5), p in prop::array::uniform2(-1.5f64..1.5)) {
        let a = average_poly(&v);
        let nodes = default_nodes(v.degree());
        let num = average_numeric(|y: &[f64]| v.eval(y), &x, &p, nodes).unwrap();
        let exact = a.eval(&x, &p);
        prop_assert!((exact.re - num).abs() < 1e-12 * (1.0 + num.abs()) * 10.0);
        prop_assert!(exact.im.abs() < 1e-12);
    }

    #[test]
    fn symbol_average_agrees_with_monomial_formula(v in potential(1, 8, 5)) {
        let a = average_poly(&v);
        let b = average_symbol(&v.to_phase());
        prop_assert!(a.approx_eq(&b, 1e-11));
    }

    #[test]
    fn delta_average_of_odd_potential_is_flow_invariant(v in potential(2, 5, 4)) {
        let odd = v.odd_part();
        let d = delta_average(&odd);
        prop_assert!(poisson_bracket(&PhasePoly::h0(2), &d).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn a0_round_trip(v in potential(2, 8, 6)) {
        let mut even = Pot::zero(2);
        for (a, c) in v.terms() {
            let doubled: Vec<u32> = a.iter().map(|e| 2 * (e / 2)).collect();
            if doubled.iter().sum::<u32>() <= 8 {
                even.add_term(&doubled, c);
            }
        }
        let back = a0_invert(&a0_apply(&even).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&even) < 1e-12);
        let comps = r_n_decompose(&even).unwrap();
        let zero = comps.get(&0).cloned().unwrap_or_else(|| PhasePolynomial::zero(2));
        prop_assert!(zero.approx_eq(&a0_apply(&even).unwrap().to_phase(), 1e-13));
    }
}

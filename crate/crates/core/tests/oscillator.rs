mod common;

use common::pot;
use nalgebra::DMatrix;
use num_complex::Complex;
use oscbands::oscillator::*;
use oscbands::symbolcalc::{moyal_poly, PhasePolynomial};

#[test]
fn unperturbed_spectrum_has_ladder_multiplicities() {
    for dim in 1..=2 {
        let basis = BasisSpec::new(dim, 0.1, 20).unwrap();
        let m = assemble_hamiltonian(&pot(dim, &[]), &basis).unwrap();
        let ev = eigensolve(&m).unwrap();
        let mut idx = 0;
        for j in 0..=20u32 {
            for _ in 0..multiplicity(dim, j) {
                assert!((ev[idx] - 0.1 * f64::from(j)).abs() < 1e-13);
                idx += 1;
            }
        }
        let data = compute_spectrum(&pot(dim, &[]), &basis).unwrap();
        let cs = detect_clusters(&data, DEFAULT_MARGIN).unwrap();
        for c in &cs.clusters {
            assert_eq!(c.shifts.len(), multiplicity(dim, c.j));
            assert!(c.shifts.iter().all(|m| m.abs() < 1e-10));
        }
    }
}

#[test]
fn linear_potential_gives_exact_shifted_ladder() {
    for hbar in [0.2, 0.1, 0.05] {
        let basis = BasisSpec::new(1, hbar, 400).unwrap();
        let data = compute_spectrum(&pot(1, &[(&[1], 1.0)]), &basis).unwrap();
        for (e, j) in data.trusted() {
            let j = f64::from(j.unwrap());
            assert!((e - (hbar * j - hbar.powi(4) / 2.0)).abs() < 1e-9);
        }
        let cs = detect_clusters(&data, DEFAULT_MARGIN).unwrap();
        assert_eq!(cs.clusters.len(), 241);
        for c in &cs.clusters {
            assert!((c.shifts[0] + hbar * hbar / 2.0).abs() < 1e-9);
        }
    }
}

#[test]
fn linear_potential_is_tridiagonal() {
    let basis = BasisSpec::new(1, 0.1, 10).unwrap();
    let m = assemble_hamiltonian(&pot(1, &[(&[1], 1.0)]), &basis).unwrap();
    for i in 0..11 {
        for j in 0..11 {
            if (i as i64 - j as i64).abs() > 1 {
                assert_eq!(m[(i, j)], 0.0);
            }
        }
    }
    assert!(m[(0, 1)] > 0.0);
}

#[test]
fn band_and_dense_assemblies_agree() {
    let v = pot(1, &[(&[4], 0.5), (&[3], -1.0), (&[1], 0.3)]);
    let basis = BasisSpec::new(1, 0.07, 60).unwrap();
    let dense = eigensolve(&assemble_hamiltonian(&v, &basis).unwrap()).unwrap();
    let band = eigensolve_banded(assemble_band_1d(&v, &basis).unwrap()).unwrap();
    for (a, b) in dense.iter().zip(&band) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn quadratic_potential_matches_closed_form() {
    let (c1, c2) = (0.5, 0.3);
    for dim in 1..=2 {
        let v = if dim == 1 {
            pot(1, &[(&[2], c1), (&[0], c2)])
        } else {
            pot(2, &[(&[2, 0], c1), (&[0, 2], c1), (&[0, 0], c2)])
        };
        for hbar in [0.1, 0.05] {
            let basis = BasisSpec::new(dim, hbar, 200).unwrap();
            let data = compute_spectrum(&v, &basis).unwrap();
            let exact = quadratic_exact_spectrum(c1, c2, dim, hbar, basis.j_trust).unwrap();
            for (e, j) in data.trusted() {
                let want = exact[j.unwrap() as usize];
                assert!(
                    (e - want).abs() <= 1e-10 * want.abs().max(hbar),
                    "dim {dim} hbar {hbar}: {e} vs {want}"
                );
            }
        }
    }
}

#[test]
fn dense_parity_path_matches_closed_form() {
    // a rotated quadratic is not separable and exercises the dense sectors
    let (c1, c2) = (0.5, 0.3);
    let v = pot(2, &[(&[2, 0], c1), (&[0, 2], c1), (&[0, 0], c2)]);
    let basis = BasisSpec::new(2, 0.1, 30).unwrap();
    let states = basis.states();
    let m = assemble_hamiltonian(&v, &basis).unwrap();
    let ev = eigensolve(&m).unwrap();
    let exact = quadratic_exact_spectrum(c1, c2, 2, 0.1, basis.j_trust).unwrap();
    let mut want: Vec<f64> = Vec::new();
    for (j, e) in exact.iter().enumerate() {
        want.extend(std::iter::repeat(*e).take(j + 1));
    }
    for (a, b) in ev.iter().zip(&want) {
        assert!((a - b).abs() < 1e-10 * b.abs().max(0.1));
    }
    assert_eq!(states.len(), ev.len());
    // a mixed quartic goes through the sector decomposition
    let w = pot(2, &[(&[2, 2], 1.0), (&[1, 1], 0.5), (&[4, 0], 0.1)]);
    let data = compute_spectrum(&w, &basis).unwrap();
    let full = eigensolve(&assemble_hamiltonian(&w, &basis).unwrap()).unwrap();
    for (a, b) in data.eigenvalues.iter().zip(&full) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn eigenpair_residuals_are_small() {
    let v = pot(2, &[(&[2, 2], 1.0), (&[3, 0], 0.2)]);
    let basis = BasisSpec::new(2, 0.1, 20).unwrap();
    let m = assemble_hamiltonian(&v, &basis).unwrap();
    let eig = m.clone().symmetric_eigen();
    let norm = m.norm();
    for k in (0..m.nrows()).step_by(17) {
        let vk = eig.eigenvectors.column(k);
        let r = &m * vk - vk * eig.eigenvalues[k];
        assert!(r.norm() <= 1e-10 * norm);
    }
}

#[test]
fn truncation_is_variational() {
    let v = pot(2, &[(&[4, 0], 1.0), (&[1, 1], 0.4), (&[0, 2], 1.0)]);
    let small = compute_spectrum(&v, &BasisSpec::new(2, 0.1, 20).unwrap()).unwrap();
    let large = compute_spectrum(&v, &BasisSpec::new(2, 0.1, 30).unwrap()).unwrap();
    for (e, _) in small.trusted() {
        let idx = small.eigenvalues.iter().position(|x| *x == e).unwrap();
        assert!(large.eigenvalues[idx] <= e + 1e-10);
    }
}

#[test]
fn quadratic_clusters_shift_linearly() {
    let basis = BasisSpec::new(1, 0.05, 40).unwrap();
    let data = compute_spectrum(&pot(1, &[(&[2], 1.0)]), &basis).unwrap();
    let cs = detect_clusters(&data, DEFAULT_MARGIN).unwrap();
    for c in &cs.clusters {
        assert_eq!(c.shifts.len(), 1);
        // mu = V^ave on the level set H0 = hbar (j + 1/2), to leading order
        let lead = 0.05 * (f64::from(c.j) + 0.5);
        assert!((c.shifts[0] - lead).abs() < 0.01 * (1.0 + lead));
    }
}

#[test]
fn overlap_is_reported() {
    let basis = BasisSpec::new(1, 0.5, 40).unwrap();
    let data = compute_spectrum(&pot(1, &[(&[4], 5.0)]), &basis).unwrap();
    assert!(matches!(
        detect_clusters(&data, DEFAULT_MARGIN),
        Err(oscbands::Error::ClusterOverlap { .. })
    ));
    assert!(clusters_by_label(&data).is_ok());
}

#[test]
fn cluster_widths_scale_quadratically() {
    let w = cluster_width_scan(&pot(1, &[(&[1], 1.0)]), 1.0, &[0.1, 0.05]).unwrap();
    assert!((w[0] - 0.1f64.powi(4) / 2.0).abs() < 1e-12);
    assert!((w[1] / w[0] - 1.0 / 16.0).abs() < 1e-6);
    let zero = cluster_width_scan(&pot(2, &[]), 1.0, &[0.1]).unwrap();
    assert!(zero[0] < 1e-12);
    let w = cluster_width_scan(
        &pot(2, &[(&[4, 0], 1.0), (&[0, 2], 1.0)]),
        1.0,
        &[0.05, 0.025],
    )
    .unwrap();
    let ratio = w[1] / w[0];
    assert!((ratio - 0.25).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn ladder_commutator_matches_moyal_orientation() {
    let hbar = 0.3;
    let x = PhasePolynomial::<f64>::x(1, 0);
    let p = PhasePolynomial::<f64>::p(1, 0);
    let sym = &moyal_poly(&x, &p, 1).unwrap() - &moyal_poly(&p, &x, 1).unwrap();
    let symbol_comm = sym.constant_term() * hbar;
    let n = 6;
    let s = (hbar / 2.0f64).sqrt();
    let xm = DMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            s * (i as f64).sqrt()
        } else if j == i + 1 {
            s * (j as f64).sqrt()
        } else {
            0.0
        }
    });
    let pm_over_i = DMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            s * (i as f64).sqrt()
        } else if j == i + 1 {
            -s * (j as f64).sqrt()
        } else {
            0.0
        }
    });
    let comm_over_i = &xm * &pm_over_i - &pm_over_i * &xm;
    let matrix_comm = Complex::new(0.0, comm_over_i[(2, 2)]);
    assert!((symbol_comm - matrix_comm).norm() < 1e-14);
}

#[test]
fn csv_export() {
    let basis = BasisSpec::new(1, 0.1, 10).unwrap();
    let data = compute_spectrum(&pot(1, &[(&[1], 1.0)]), &basis).unwrap();
    let cs = clusters(&data).unwrap();
    let csv = cs.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("j,k,E,mu"));
    assert_eq!(lines.count(), 7);
    let json = serde_json::to_string(&cs).unwrap();
    let back: ClusterSet = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cs);
}

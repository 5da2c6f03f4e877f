//! Exact Gaussian moments on phase space.

use num_complex::Complex;

use crate::scalar::Cx;
use crate::symbolcalc::PhasePolynomial;

/// `int_R e^{-a t^2} t^k dt`.
pub fn gaussian_moment_1d(k: u32, a: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let h = f64::from(k + 1) / 2.0;
    gamma(h) / a.powf(h)
}

/// `Gamma(m/2)` for positive integers `m`, exactly via the half-integer recursion.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0);
    if m % 2 == 0 {
        (1..m / 2).map(f64::from).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < f64::from(m) / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

fn gamma(h: f64) -> f64 {
    gamma_half((2.0 * h).round() as u32)
}

/// `int_{R^{2n}} e^{-mu |z|^2} P dx dp` in closed form.
pub fn gaussian_phase_integral(p: &PhasePolynomial<f64>, mu: f64) -> Cx<f64> {
    gaussian_phase_integral_aniso(p, &vec![mu; p.dim()])
}

/// `int e^{-sum_i mu_i |z_i|^2} P dx dp`.
pub fn gaussian_phase_integral_aniso(p: &PhasePolynomial<f64>, mu: &[f64]) -> Cx<f64> {
    let n = p.dim();
    assert_eq!(mu.len(), n);
    let mut acc = Complex::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut w = 1.0;
        for i in 0..n {
            w *= gaussian_moment_1d(m.exp(i), mu[i]) * gaussian_moment_1d(m.exp(n + i), mu[i]);
            if w == 0.0 {
                break;
            }
        }
        acc += c * w;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_integer_gamma() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(8), 6.0);
    }

    #[test]
    fn basic_integrals() {
        let one = PhasePolynomial::<f64>::one(2);
        assert!((gaussian_phase_integral(&one, 2.0).re - PI * PI / 4.0).abs() < 1e-14);
        let z1 = &PhasePolynomial::<f64>::x(2, 0).pow(2) + &PhasePolynomial::p(2, 0).pow(2);
        assert!((gaussian_phase_integral(&z1, 2.0).re - PI * PI / 8.0).abs() < 1e-14);
    }
}

//! Energy weights `f` and test functions `phi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The weight `f` in `f(H_0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `f(s) = e^{-mu s}`.
    Gaussian { mu: f64 },
    /// `f(s) = exp(-1 / (1 - ((s - center)/radius)^2))` on `|s - center| < radius`.
    Bump { center: f64, radius: f64 },
}

impl WeightSpec {
    pub fn gaussian(mu: f64) -> Result<Self> {
        let w = WeightSpec::Gaussian { mu };
        w.validate()?;
        Ok(w)
    }

    pub fn bump(center: f64, radius: f64) -> Result<Self> {
        let w = WeightSpec::Bump { center, radius };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightSpec::Gaussian { mu } if !(mu.is_finite() && mu > 0.0) => Err(
                Error::InvalidArgument(format!("gaussian rate must be positive, got {mu}")),
            ),
            WeightSpec::Bump { center, radius }
                if !(radius.is_finite() && radius > 0.0 && center.is_finite()) =>
            {
                Err(Error::InvalidArgument(format!(
                    "bump radius must be positive, got {radius}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            WeightSpec::Gaussian { mu } => (-mu * s).exp(),
            WeightSpec::Bump { center, radius } => {
                let t = (s - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - t * t)).exp()
                }
            }
        }
    }

    /// Rate `mu` of a Gaussian weight.
    pub fn gaussian_rate(&self) -> Option<f64> {
        match *self {
            WeightSpec::Gaussian { mu } => Some(mu),
            WeightSpec::Bump { .. } => None,
        }
    }

    /// Energy beyond which `f` is below `eps` (relative to its maximum).
    pub fn support_end(&self, eps: f64) -> f64 {
        match *self {
            WeightSpec::Gaussian { mu } => -eps.ln() / mu,
            WeightSpec::Bump { center, radius } => center + radius,
        }
    }

    /// Lower end of the support, clamped at 0.
    pub fn support_start(&self) -> f64 {
        match *self {
            WeightSpec::Gaussian { .. } => 0.0,
            WeightSpec::Bump { center, radius } => (center - radius).max(0.0),
        }
    }
}

/// A polynomial test function `phi(s) = sum_k c_k s^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyFn(pub Vec<f64>);

impl PolyFn {
    pub fn constant(c: f64) -> Self {
        PolyFn(vec![c])
    }

    pub fn identity() -> Self {
        PolyFn(vec![0.0, 1.0])
    }

    /// `s^k`.
    pub fn power(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        PolyFn(c)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }
}

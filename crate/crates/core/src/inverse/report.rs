//! Recovery reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::averaging::Potential;

/// The object a recovery produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recovered {
    Potential {
        potential: Potential<f64>,
    },
    Semiclassical {
        orders: Vec<Potential<f64>>,
    },
    /// Odd coefficients `a_1, a_3, ...`.
    OddCoefficients {
        coefficients: Vec<f64>,
    },
    Multiset {
        values: Vec<f64>,
    },
    Norm {
        value: f64,
    },
    /// Samples `V(s_i)` with `s_i^2` on a uniform grid, plus an optional
    /// least-squares even polynomial through them.
    Profile {
        s: Vec<f64>,
        values: Vec<f64>,
        fit: Option<Potential<f64>>,
    },
    /// Averaged one-variable profiles on the `|z_j|^2` grid and the
    /// corresponding potentials `f_j(x^2)` at `x = sqrt(rho)`.
    Separable {
        rho: Vec<f64>,
        phi1: Vec<f64>,
        phi2: Vec<f64>,
        f1: Vec<f64>,
        f2: Vec<f64>,
    },
    SingularValue {
        value: f64,
    },
}

/// Non-uniqueness inherent in each recovery.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityFlags {
    pub sign: bool,
    pub rotation: bool,
    pub swap: bool,
    pub constant_split: bool,
    /// Components invisible to the averaged data (odd parts).
    pub odd_part: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub recovered: Recovered,
    pub residuals: BTreeMap<String, f64>,
    pub flags: AmbiguityFlags,
    pub condition_numbers: BTreeMap<String, f64>,
}

impl RecoveryReport {
    pub fn new(recovered: Recovered) -> Self {
        RecoveryReport {
            recovered,
            residuals: BTreeMap::new(),
            flags: AmbiguityFlags::default(),
            condition_numbers: BTreeMap::new(),
        }
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    pub fn condition(mut self, key: &str, value: f64) -> Self {
        let e = self
            .condition_numbers
            .entry(key.to_string())
            .or_insert(value);
        *e = e.max(value);
        self
    }

    pub fn flags(mut self, flags: AmbiguityFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0, |a, b| a.max(b.abs()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

//! Run reports and verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{Check, ConfigFile};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub metric: String,
    /// `None` when the task did not produce the metric or it is not finite.
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    pub passed: bool,
}

impl Verdict {
    pub fn evaluate(check: &Check, metrics: &BTreeMap<String, f64>) -> Self {
        let value = metrics
            .get(&check.metric)
            .copied()
            .filter(|v| v.is_finite());
        let passed = value
            .is_some_and(|v| check.min.is_none_or(|m| v >= m) && check.max.is_none_or(|m| v <= m));
        Verdict {
            metric: check.metric.clone(),
            value,
            min: check.min,
            max: check.max,
            passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub task: String,
    pub results: Value,
    pub metrics: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
}

/// Report of one config file. Contains nothing run-dependent, so repeated
/// runs produce identical bytes; timing is reported separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub tool_version: String,
    pub config: ConfigFile,
    pub experiments: Vec<ExperimentResult>,
    pub passed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_verdicts(&self) -> Vec<(&str, &Verdict)> {
        self.experiments
            .iter()
            .flat_map(|e| {
                e.verdicts
                    .iter()
                    .filter(|v| !v.passed)
                    .map(move |v| (e.name.as_str(), v))
            })
            .collect()
    }
}

/// What one task produced.
#[derive(Clone, Debug, Default)]
pub struct TaskOutput {
    pub results: Value,
    pub metrics: BTreeMap<String, f64>,
    /// `(file name, CSV text)`.
    pub tables: Vec<(String, String)>,
}

impl TaskOutput {
    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    /// Keeps the largest value seen for `key`.
    pub fn metric_max(&mut self, key: &str, value: f64) {
        let e = self
            .metrics
            .entry(key.to_string())
            .or_insert(f64::NEG_INFINITY);
        if value > *e || value.is_nan() {
            *e = value;
        }
    }
}

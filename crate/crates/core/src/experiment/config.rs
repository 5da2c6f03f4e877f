//! Experiment configuration: parsing, defaults and validation.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::averaging::{Potential, SemiclassicalPotential};
use crate::error::{Error, Result};
use crate::invariants::WeightSpec;

pub const TASKS: [&str; 15] = [
    "spectrum",
    "clusters",
    "invariant-first",
    "invariant-second",
    "invariant-odd",
    "szego",
    "fit-expansion",
    "recover-even1d",
    "recover-odd1d",
    "recover-hessian",
    "recover-separable",
    "recover-2d",
    "recover-semiclassical",
    "rigidity",
    "convention-audit",
];

pub const AUDIT_SUITES: [&str; 4] = [
    "linear-anchor",
    "averaging-identities",
    "propagator",
    "fourier-laws",
];
pub const HESSIAN_MODES: [&str; 3] = ["hessian", "linear-norm", "class-check"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HbarGrid {
    pub max: f64,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Classical,
    Quantum,
}

/// A requested verdict: `min <= metrics[metric] <= max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

/// Numeric parameters; every field is optional in the file and filled with
/// the task default before running.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_trust: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar_grid: Option<HbarGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    /// Polynomial coefficients of `phi`, constant first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_orders: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub szego_n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_true")]
    pub csv: bool,
}

fn default_report() -> String {
    "report.json".into()
}

fn default_true() -> bool {
    true
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            report: default_report(),
            csv: true,
        }
    }
}

/// One experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Potential<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<SemiclassicalPotential<f64>>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub checks: Vec<Check>,
}

/// A config file: one experiment or a named list of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub name: String,
    pub experiments: Vec<ExperimentConfig>,
    pub outputs: Outputs,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ConfigFile {
    /// Parses either `{"name", "experiments": [...], "outputs"}` or a single
    /// experiment object (with an optional `outputs`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut value: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| bad("config must be a JSON object"))?;
        let outputs = match obj.remove("outputs") {
            Some(v) => serde_json::from_value(v).map_err(|e| bad(format!("outputs: {e}")))?,
            None => Outputs::default(),
        };
        if let Some(list) = obj.remove("experiments") {
            let name = match obj.remove("name") {
                Some(Value::String(s)) => s,
                Some(_) => return Err(bad("name must be a string")),
                None => "experiments".into(),
            };
            if let Some(k) = obj.keys().next() {
                return Err(bad(format!("unknown top-level field `{k}`")));
            }
            let Value::Array(items) = list else {
                return Err(bad("experiments must be an array"));
            };
            let experiments = items
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    serde_json::from_value(v).map_err(|e| bad(format!("experiments[{i}]: {e}")))
                })
                .collect::<Result<Vec<ExperimentConfig>>>()?;
            if experiments.is_empty() {
                return Err(bad("experiments must not be empty"));
            }
            Ok(ConfigFile {
                name,
                experiments,
                outputs,
            })
        } else {
            let exp: ExperimentConfig =
                serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
            Ok(ConfigFile {
                name: exp.name.clone().unwrap_or_else(|| exp.task.clone()),
                experiments: vec![exp],
                outputs,
            })
        }
    }

    /// All schema and cross-field violations, prefixed by experiment index.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.outputs.report.is_empty() || self.outputs.report.contains('/') {
            out.push("outputs.report must be a plain file name".to_string());
        }
        for (i, e) in self.experiments.iter().enumerate() {
            for v in e.violations() {
                out.push(format!("experiments[{i}] ({}): {v}", e.task));
            }
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Config(v.join("; ")))
        }
    }

    /// The config with every task default filled in.
    pub fn resolved(&self) -> Self {
        ConfigFile {
            name: self.name.clone(),
            experiments: self
                .experiments
                .iter()
                .map(ExperimentConfig::resolved)
                .collect(),
            outputs: self.outputs.clone(),
        }
    }
}

fn set<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}

fn needs_potential(task: &str) -> bool {
    !matches!(task, "recover-semiclassical")
}

fn dims_for(task: &str) -> &'static [usize] {
    match task {
        "recover-even1d" | "recover-odd1d" | "invariant-odd" => &[1],
        "recover-separable" | "recover-2d" | "recover-semiclassical" | "rigidity" => &[2],
        _ => &[1, 2],
    }
}

impl ExperimentConfig {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let task = self.task.as_str();
        if !TASKS.contains(&task) {
            out.push(format!(
                "unknown task `{task}`; allowed: {}",
                TASKS.join(", ")
            ));
            return out;
        }
        let p = &self.params;
        let dim = match (&self.potential, &self.family) {
            (Some(v), None) => Some(v.dim()),
            (None, Some(f)) => f.orders.first().map(Potential::dim),
            (Some(_), Some(_)) => {
                out.push("give either `potential` or `family`, not both".into());
                None
            }
            (None, None) => None,
        };
        if task == "recover-semiclassical" && self.family.is_none() {
            out.push("task needs a `family`".into());
        } else if needs_potential(task) && self.potential.is_none() && task != "convention-audit" {
            out.push("task needs a `potential`".into());
        }
        if let Some(d) = dim {
            if !dims_for(task).contains(&d) {
                out.push(format!("dimension {d} not supported by this task"));
            }
        }
        if let Some(hs) = &p.hbar {
            if hs.is_empty() || hs.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
                out.push("hbar values must be positive".into());
            }
        }
        if let (Some(t), Some(j)) = (p.j_trust, p.j_max) {
            if t >= j {
                out.push(format!("j_trust ({t}) must be below j_max ({j})"));
            }
        }
        if let Some(g) = &p.hbar_grid {
            if !(g.max > 0.0 && g.ratio > 0.0 && g.ratio < 1.0) {
                out.push("hbar_grid must be geometric: max > 0 and 0 < ratio < 1".into());
            }
            if g.count < 5 {
                out.push("hbar_grid.count must be at least 5".into());
            }
        }
        if let Some(w) = &p.weight {
            if let Err(e) = w.validate() {
                out.push(format!("weight: {e}"));
            }
        }
        if let Some(e) = p.energy {
            if !(e.is_finite() && e > 0.0) {
                out.push("energy must be positive".into());
            }
        }
        if let Some(ns) = &p.n_list {
            if ns.is_empty() || ns.contains(&0) {
                out.push("n_list entries must be positive".into());
            }
        }
        if let Some(c) = p.count {
            if c < 5 || c % 2 == 0 {
                out.push("count must be odd and at least 5".into());
            }
        }
        if let Some(r) = p.r_max {
            if !(r.is_finite() && r > 0.0) {
                out.push("r_max must be positive".into());
            }
        }
        if let Some(d) = p.degree {
            if task == "recover-odd1d" && d % 2 == 0 {
                out.push("degree must be odd for odd recovery".into());
            }
            if matches!(task, "recover-2d" | "recover-semiclassical" | "rigidity") && d % 2 == 1 {
                out.push("degree must be even".into());
            }
        }
        if let Some(m) = &p.mode {
            if task == "recover-hessian" && !HESSIAN_MODES.contains(&m.as_str()) {
                out.push(format!(
                    "unknown mode `{m}`; allowed: {}",
                    HESSIAN_MODES.join(", ")
                ));
            }
        }
        if task == "convention-audit" {
            match p.suite.as_deref() {
                Some(s) if AUDIT_SUITES.contains(&s) => {
                    if s == "linear-anchor" && self.potential.is_some() {
                        out.push("linear-anchor audits V = x; omit `potential`".into());
                    }
                }
                Some(s) => out.push(format!(
                    "unknown suite `{s}`; allowed: {}",
                    AUDIT_SUITES.join(", ")
                )),
                None => out.push(format!(
                    "convention-audit needs `suite`; allowed: {}",
                    AUDIT_SUITES.join(", ")
                )),
            }
        }
        for c in &self.checks {
            if c.min.is_none() && c.max.is_none() {
                out.push(format!("check on `{}` needs min or max", c.metric));
            }
        }
        out
    }

    /// Fills task defaults into every unset parameter.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        let p = &mut c.params;
        let dim = self.potential.as_ref().map(Potential::dim).or_else(|| {
            self.family
                .as_ref()
                .and_then(|f| f.orders.first().map(Potential::dim))
        });
        match self.task.as_str() {
            "spectrum" | "clusters" => {
                set(&mut p.hbar, vec![0.1]);
                set(&mut p.j_max, if dim == Some(2) { 60 } else { 200 });
                let j = p.j_max.unwrap_or(60);
                set(
                    &mut p.j_trust,
                    (f64::from(j) * crate::oscillator::TRUST_FRACTION).floor() as u32,
                );
                if self.task == "clusters" {
                    set(&mut p.energy, 1.0);
                }
            }
            "invariant-first" | "invariant-second" | "invariant-odd" | "fit-expansion" => {
                set(
                    &mut p.hbar_grid,
                    HbarGrid {
                        max: 0.1,
                        ratio: 0.8,
                        count: 8,
                    },
                );
                set(&mut p.weight, WeightSpec::Gaussian { mu: 1.0 });
                set(&mut p.fit_orders, vec![0, 1, 2]);
                if self.task == "invariant-second" {
                    set(&mut p.l, 0);
                } else {
                    set(&mut p.phi, vec![vec![0.0, 1.0]]);
                }
            }
            "szego" => {
                set(&mut p.energy, 1.0);
                set(&mut p.phi, vec![vec![0.0, 1.0]]);
                set(&mut p.n_list, vec![20, 40, 80]);
            }
            "recover-even1d" => {
                set(&mut p.source, Source::Classical);
                set(&mut p.r_max, 2.0);
                set(&mut p.count, 401);
                set(&mut p.tol, 1e-3);
                set(&mut p.szego_n, 80);
            }
            "recover-odd1d" => set(&mut p.degree, 5),
            "recover-hessian" => set(&mut p.mode, "hessian".to_string()),
            "recover-separable" => {
                let d = crate::inverse::SeparableOptions::default();
                set(&mut p.r_max, d.rho_max.sqrt());
                set(&mut p.count, d.count);
                set(&mut p.moments, d.moments);
                set(&mut p.profile_degree, d.degree);
                set(&mut p.check_nodes, d.check_nodes);
                set(&mut p.tol, d.tol);
            }
            "recover-2d" => set(&mut p.degree, 4),
            "recover-semiclassical" => {
                set(&mut p.degree, 4);
                set(
                    &mut p.orders,
                    self.family
                        .as_ref()
                        .map_or(1, |f| f.orders.len().saturating_sub(1)),
                );
            }
            "rigidity" => set(&mut p.degree, 6),
            "convention-audit" => match p.suite.as_deref() {
                Some("linear-anchor") => {
                    set(&mut p.hbar, vec![0.2, 0.1, 0.05]);
                    set(&mut p.j_max, 400);
                }
                Some("averaging-identities") => {
                    set(&mut p.samples, 20);
                    set(&mut p.seed, 7);
                    set(&mut p.degree, 8);
                }
                Some("fourier-laws") => set(&mut p.degree, 10),
                _ => {}
            },
            _ => {}
        }
        c
    }
}

//! Config-driven experiments: each experiment runs one task and turns its
//! metrics into verdicts.

mod audit;
pub mod config;
mod direct;
mod recover;
pub mod report;

pub use config::{
    Check, ConfigFile, ExperimentConfig, HbarGrid, Outputs, Params, Source, AUDIT_SUITES, TASKS,
};
pub use report::{ExperimentResult, RunReport, TaskOutput, Verdict, TOOL_VERSION};

use crate::error::{Error, Result};

/// Runs one resolved experiment.
pub fn run_task(cfg: &ExperimentConfig) -> Result<TaskOutput> {
    match cfg.task.as_str() {
        "spectrum" => direct::spectrum(cfg),
        "clusters" => direct::cluster_task(cfg),
        "invariant-first" => direct::invariant_first(cfg),
        "invariant-second" => direct::invariant_second(cfg),
        "invariant-odd" => direct::invariant_odd(cfg),
        "szego" => direct::szego(cfg),
        "fit-expansion" => direct::fit_expansion(cfg),
        "recover-even1d" => recover::even_1d(cfg),
        "recover-odd1d" => recover::odd_1d(cfg),
        "recover-hessian" => recover::hessian(cfg),
        "recover-separable" => recover::separable(cfg),
        "recover-2d" => recover::analytic_2d(cfg),
        "recover-semiclassical" => recover::semiclassical(cfg),
        "rigidity" => recover::rigidity(cfg),
        "convention-audit" => audit::run(cfg),
        t => Err(Error::Config(format!("unknown task `{t}`"))),
    }
}

/// Validates, resolves and runs every experiment of `file`. Returns the
/// report and the CSV tables as `(file name, text)`.
pub fn run_config(file: &ConfigFile) -> Result<(RunReport, Vec<(String, String)>)> {
    let file = file.clone().validated()?.resolved();
    let mut experiments = Vec::with_capacity(file.experiments.len());
    let mut tables = Vec::new();
    for (i, cfg) in file.experiments.iter().enumerate() {
        let name = cfg
            .name
            .clone()
            .unwrap_or_else(|| format!("{i}-{}", cfg.task));
        let out = run_task(cfg)?;
        let verdicts = cfg
            .checks
            .iter()
            .map(|c| Verdict::evaluate(c, &out.metrics))
            .collect();
        if file.outputs.csv {
            let prefix = if file.experiments.len() > 1 {
                format!("{name}_")
            } else {
                String::new()
            };
            tables.extend(
                out.tables
                    .into_iter()
                    .map(|(n, t)| (format!("{prefix}{n}"), t)),
            );
        }
        experiments.push(ExperimentResult {
            name,
            task: cfg.task.clone(),
            results: out.results,
            metrics: out.metrics,
            verdicts,
        });
    }
    let passed = experiments
        .iter()
        .all(|e| e.verdicts.iter().all(|v| v.passed));
    Ok((
        RunReport {
            name: file.name.clone(),
            tool_version: TOOL_VERSION.into(),
            config: file,
            experiments,
            passed,
        },
        tables,
    ))
}

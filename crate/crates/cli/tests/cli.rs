use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscbands"))
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run"])
        .arg(corpus("examples/clusters-linear.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["experiments"][0]["params"]["j_max"], 200);
    let csv = std::fs::read_to_string(dir.path().join("clusters.csv")).unwrap();
    assert!(csv.starts_with("j,k,E,mu\n"));
    for line in csv.lines().skip(1) {
        let mu: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((mu + 0.005).abs() < 1e-9, "{line}");
    }
    assert!(dir.path().join("timing.json").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = bin()
            .arg("run")
            .arg(corpus("examples/recover-hessian.json"))
            .arg("--out")
            .arg(d.path())
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "clusters", "potential": {"dim": 1, "terms": [{"alpha": [1], "coeff": 1.0}]},
            "checks": [{"metric": "shift_max", "max": -0.01}]}"#,
    );
    let o = bin()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn numeric_error_exits_three_with_module_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "recover-odd1d", "potential": {"dim": 1, "terms": [{"alpha": [2], "coeff": 1.0}]}}"#,
    );
    let o = bin()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn validate_echoes_defaults() {
    let o = bin()
        .arg("validate")
        .arg(corpus("examples/szego-free.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.starts_with("ok\n"));
    assert!(out.contains("\"n_list\""));
}

#[test]
fn validate_names_trust_window_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "spectrum", "potential": {"dim": 1, "terms": []}, "params": {"j_max": 50, "j_trust": 50}}"#,
    );
    let o = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("j_trust (50) must be below j_max (50)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn unknown_task_lists_allowed_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "eigen", "potential": {"dim": 1, "terms": []}}"#,
    );
    for cmd in ["validate", "run"] {
        let o = bin().arg(cmd).arg(&cfg).output().unwrap();
        assert_eq!(o.status.code(), Some(2));
        let e = stderr(&o);
        assert!(
            e.contains("unknown task `eigen`") && e.contains("recover-semiclassical"),
            "{e}"
        );
    }
}

#[test]
fn unreadable_and_malformed_files_exit_two() {
    let o = bin()
        .arg("validate")
        .arg("/nonexistent/config.json")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "spectrum", "potential": {"dim": 1, "terms": []}, "params": {"hbar_max": 1}}"#,
    );
    let o = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hbar_max"));
}

#[test]
fn every_corpus_config_validates() {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.extend(
        std::fs::read_dir(corpus("examples"))
            .unwrap()
            .map(|e| e.unwrap().path()),
    );
    for f in files
        .iter()
        .filter(|f| f.extension().is_some_and(|e| e == "json"))
    {
        let o = bin().arg("validate").arg(f).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}: {}", f.display(), stderr(&o));
    }
}

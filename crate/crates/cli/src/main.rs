//! `oscbands run <config.json> [--out DIR]` and `oscbands validate <config.json>`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use oscbands::experiment::{run_config, ConfigFile};
use oscbands::Error;

const EXIT_VERDICT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "oscbands",
    version,
    about = "Band invariants and inverse spectral experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config and write the report.
    Run {
        config: PathBuf,
        /// Output directory (default: `oscbands-out/<config stem>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn load(path: &Path) -> Result<ConfigFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    ConfigFile::parse(&text)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if matches!(e, Error::Config(_)) {
        EXIT_CONFIG
    } else {
        EXIT_NUMERIC
    })
}

fn validate(path: &Path) -> ExitCode {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let violations = cfg.violations();
    if violations.is_empty() {
        println!("ok");
        println!(
            "{}",
            serde_json::to_string_pretty(&cfg.resolved()).expect("config serializes")
        );
        ExitCode::SUCCESS
    } else {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        ExitCode::from(EXIT_CONFIG)
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Error> {
    std::fs::write(dir.join(name), text)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.join(name).display())))
}

fn run(path: &Path, out: Option<PathBuf>) -> ExitCode {
    let start = Instant::now();
    let cfg = match load(path) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let (report, tables) = match run_config(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let dir = out.unwrap_or_else(|| {
        let stem = path
            .file_stem()
            .map_or("run".into(), |s| s.to_string_lossy().into_owned());
        PathBuf::from("oscbands-out").join(stem)
    });
    let written = std::fs::create_dir_all(&dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
        .and_then(|()| write(&dir, &report.config.outputs.report, &report.to_json()))
        .and_then(|()| {
            tables
                .iter()
                .try_for_each(|(name, text)| write(&dir, name, text))
        })
        .and_then(|()| {
            let timing = serde_json::json!({ "wall_seconds": start.elapsed().as_secs_f64() });
            write(&dir, "timing.json", &timing.to_string())
        });
    if let Err(e) = written {
        return fail(&e);
    }
    for exp in &report.experiments {
        for v in &exp.verdicts {
            let value = v
                .value
                .map_or("missing".to_string(), |x| format!("{x:.6e}"));
            println!(
                "{} {}: {} = {value}",
                if v.passed { "PASS" } else { "FAIL" },
                exp.name,
                v.metric
            );
        }
    }
    println!(
        "report: {}",
        dir.join(&report.config.outputs.report).display()
    );
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => run(&config, out),
        Command::Validate { config } => validate(&config),
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mzi_opt_cli::presets::{preset, PRESET_IDS};
use mzi_opt_cli::run::{csv_bytes, write_atomic};
use mzi_opt_cli::{run_to, Failure, Scenario, Summary};

#[derive(Parser)]
#[command(name = "mzi-opt", version, about = "Phase-sensitivity optimization of unbalanced Mach-Zehnder interferometers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a scenario, write its CSV and print the summary record.
    Run { scenario: PathBuf },
    /// Run every scenario of a figure preset (fig3 … fig12).
    Preset {
        id: String,
        /// Directory for the scenario files and CSVs.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check a scenario file and list every violation.
    Validate { scenario: PathBuf },
    /// Write only the sweep CSV of a scenario.
    Sweep { scenario: PathBuf },
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let parsed = Scenario::from_file(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parsed.map_err(|v| Failure::Validation(vec![v.to_string()]))
}

fn record(name: Option<&str>, s: &Summary) -> String {
    let mut v = serde_json::to_value(s).expect("summary serializes");
    if let Some(n) = name {
        v.as_object_mut().expect("object").insert("scenario".into(), n.into());
    }
    v.to_string()
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { scenario } => {
            let s = load(&scenario)?;
            let summary = run_to(&s, Path::new("."))?;
            println!("{}", record(None, &summary));
        }
        Command::Validate { scenario } => {
            let s = load(&scenario)?;
            let v = s.validate();
            if !v.is_empty() {
                return Err(Failure::Validation(v.iter().map(|v| v.to_string()).collect()));
            }
            println!("ok");
        }
        Command::Sweep { scenario } => {
            let s = load(&scenario)?;
            let Some(sw) = s.sweep else {
                return Err(Failure::Validation(vec!["sweep: required by the sweep command".into()]));
            };
            let out = mzi_opt_cli::evaluate_scenario(&s)?;
            write_atomic(Path::new(&s.output_path), &csv_bytes(sw.variable.name(), &out.rows)?)?;
            println!("{}", serde_json::json!({ "rows": out.rows.len(), "output_path": s.output_path }));
        }
        Command::Preset { id, out } => {
            let list = preset(&id).ok_or_else(|| {
                Failure::Validation(vec![format!("id: unknown preset {id:?}, expected one of {}", PRESET_IDS.join(", "))])
            })?;
            for ns in list {
                write_atomic(&out.join(format!("{}.json", ns.name)), ns.scenario.to_json().as_bytes())?;
                let summary = run_to(&ns.scenario, &out)?;
                println!("{}", record(Some(&ns.name), &summary));
            }
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("MZI_OPT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Only fails if a global pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mzi-opt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

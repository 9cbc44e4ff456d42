use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use photonlab_cli::{run_experiment, ConfigError, ExperimentConfig, RunError};

/// Thread count for the internal parallel loops; unset means one per core.
const THREADS_ENV: &str = "PHOTONLAB_THREADS";

#[derive(Parser)]
#[command(
    name = "photonlab",
    version,
    about = "Run photonlab experiments from JSON configs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment; writes report.json and field dumps.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for randomized inputs (overrides the config's `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn setup_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        ConfigError::new(
            THREADS_ENV,
            format!("expected a positive integer, got {raw:?}"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError::new(THREADS_ENV, e.to_string()))
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = setup_threads() {
        return usage_error(e);
    }
    match cli.command {
        Command::Validate { config } => match ExperimentConfig::load(&config).and_then(|c| {
            c.validate()?;
            c.tolerances()
        }) {
            Ok(tolerances) => {
                println!("{}: ok", config.display());
                for (name, cmp, value) in tolerances {
                    println!(
                        "  {name} {} {value:e}",
                        serde_json::to_value(cmp).unwrap().as_str().unwrap()
                    );
                }
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(e),
        },
        Command::Run { config, out, seed } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("photonlab-out"));
            let report = match run_experiment(&cfg, &out) {
                Ok(r) => r,
                Err(e @ RunError::Config(_)) | Err(e @ RunError::Dump(_)) => return usage_error(e),
            };
            let json = report.to_json();
            let path = out.join("report.json");
            if let Err(e) = std::fs::write(&path, format!("{json}\n")) {
                return usage_error(format!("{}: {e}", path.display()));
            }
            println!("{json}");
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "FAIL {}: {:?} vs threshold {}",
                    c.metric,
                    c.value.map(|v| v.0),
                    c.threshold.0
                );
            }
            if let Some(e) = &report.error {
                eprintln!("FAIL numerical error: {e}");
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

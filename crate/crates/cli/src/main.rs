use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use genericity_cli::{run, ExperimentConfig, ExperimentId, ExperimentResult};

/// Run generic-case complexity experiments and emit JSON (and optionally CSV).
#[derive(Parser, Debug)]
#[command(name = "genericity", version)]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment name; overrides the config. `battery` runs them all.
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Write the JSON payload here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write plot data (CSV) here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
    /// Exit with status 3 when any check fails.
    #[arg(long)]
    check: bool,
}

const VALIDATION: u8 = 1;
const RUNTIME: u8 = 2;
const CHECK_FAILED: u8 = 3;

fn config_from(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| e.to_string())?,
        None => ExperimentConfig::default(),
    };
    if let Some(name) = &cli.experiment {
        config.experiment = Some(name.parse::<ExperimentId>().map_err(|e| e.to_string())?);
    }
    config.seed = cli.seed.or(config.seed);
    config.trials = cli.trials.or(config.trials);
    config.out = cli.out.clone().or(config.out);
    config.csv = cli.csv.clone().or(config.csv);
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn summary(result: &ExperimentResult) {
    let p = &result.payload;
    eprintln!("{} ({} ms)", p.experiment, result.header.wall_time_ms);
    for c in p.all_checks() {
        eprintln!("  {:<4} {}  {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    let config = match config_from(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(VALIDATION);
        }
    };
    let result = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(RUNTIME);
        }
    };
    if config.out.is_none() {
        match result.payload.to_json() {
            Ok(json) => println!("{json}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(RUNTIME);
            }
        }
    }
    if !cli.quiet {
        summary(&result);
    }
    if cli.check && !result.payload.passed {
        return ExitCode::from(CHECK_FAILED);
    }
    ExitCode::SUCCESS
}

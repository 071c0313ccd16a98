use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dbar_kernels::cli::{run, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "dbar", version, about = "Integral solution operators for the dbar-equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed (overrides `seed` in the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Estimate the convexity conditions of the domain.
    CheckDomain,
    /// Apply an operator to the data at probe points.
    Solve,
    /// Koppelman and homotopy residuals along a resolution ladder.
    Verify,
    /// Hölder estimator calibration and gain table.
    Holder,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let Some(path) = cli.config else {
        eprintln!("error: --config is required");
        return ExitCode::from(2);
    };
    let mut cfg = match ExperimentConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let cmd = match cli.command {
        Sub::CheckDomain => Command::CheckDomain,
        Sub::Solve => Command::Solve,
        Sub::Verify => Command::Verify,
        Sub::Holder => Command::Holder,
    };
    match run(cmd, &cfg) {
        Ok(report) => {
            print!("{}", report.summary());
            if report.failed() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

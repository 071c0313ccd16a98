//! The experiment driver behind the `dbar` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{cmd_check_domain, cmd_holder, cmd_solve, cmd_verify};
pub use config::{DataConfig, ExperimentConfig, HolderConfig, OperatorConfig, OperatorKind, ResolutionConfig};
pub use report::{Check, Fingerprint, RunReport, Status};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckDomain,
    Solve,
    Verify,
    Holder,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckDomain => "check-domain",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Holder => "holder",
        }
    }
}

/// Runs `cmd`, writes `report_<cmd>.json` to the output directory and returns the report.
pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<RunReport> {
    let report = match cmd {
        Command::CheckDomain => cmd_check_domain(cfg)?,
        Command::Solve => cmd_solve(cfg)?,
        Command::Verify => cmd_verify(cfg)?,
        Command::Holder => cmd_holder(cfg)?,
    };
    report.write_json(&cfg.out.join(format!("report_{}.json", cmd.name())))?;
    Ok(report)
}

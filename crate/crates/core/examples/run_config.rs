//! Runs a subcommand on a config file, as the `dbar` binary does.
//!
//! cargo run --example run_config -- check-domain configs/ball_check.toml

use dbar_kernels::cli::{run, Command, ExperimentConfig};

fn main() -> dbar_kernels::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let (cmd, path) = match args.as_slice() {
        [_, c, p] => (c.as_str(), p.as_str()),
        _ => ("check-domain", "configs/ball_check.toml"),
    };
    let cmd = match cmd {
        "solve" => Command::Solve,
        "verify" => Command::Verify,
        "holder" => Command::Holder,
        _ => Command::CheckDomain,
    };
    let cfg = ExperimentConfig::load(path.as_ref())?;
    let report = run(cmd, &cfg)?;
    print!("{}", report.summary());
    Ok(())
}

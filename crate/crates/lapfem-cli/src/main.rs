//! `lapfem <command> [--config path] [--out dir] [--nu value] [--quiet]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 verification failure.

use clap::{Parser, ValueEnum};
use lapfem::experiment::{exit_code, run, Command, ExperimentConfig, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Solve,
    Sweep,
    Decompose,
    Limit,
    Oracle1d,
    PlasmaGen,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Solve => Command::Solve,
            Cmd::Sweep => Command::Sweep,
            Cmd::Decompose => Command::Decompose,
            Cmd::Limit => Command::Limit,
            Cmd::Oracle1d => Command::Oracle1d,
            Cmd::PlasmaGen => Command::PlasmaGen,
            Cmd::Verify => Command::Verify,
        }
    }
}

#[derive(Parser, Debug)]
#[command(version, about = "Limiting-absorption experiments for div((xA + i nu T) grad u) = f")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// TOML configuration; defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out` from the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absorption parameter (overrides `nu` from the config)
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    };
    let result = cfg.and_then(|cfg| run(args.command.into(), &cfg, &RunOptions { out: args.out.clone(), nu: args.nu }));
    match result {
        Ok(outcome) => {
            if !args.quiet {
                println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("json value"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lapfem: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use awtool::{run, write_atomic, CliError, Command};
use clap::Parser;

/// Verification campaigns and ASEP computations driven by a JSON config.
#[derive(Debug, Parser)]
#[command(name = "awtool", version)]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the primary tolerance of the command.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("awtool: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: &Args) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let outcome = run(args.command, &text, args.seed, args.tol, args.out.as_deref())?;
    let mut stdout = std::io::stdout().lock();
    match &args.out {
        Some(p) => write_atomic(p, &outcome.bytes)?,
        None => stdout.write_all(&outcome.bytes)?,
    }
    if let Some(table) = &outcome.table {
        match &outcome.table_path {
            Some(p) => write_atomic(p, table)?,
            None => stdout.write_all(table)?,
        }
    }
    let s = &outcome.report["summary"];
    eprintln!("{}: {}/{} checks passed", args.command.name(), s["passed"], s["checks"]);
    Ok(outcome.all_pass)
}

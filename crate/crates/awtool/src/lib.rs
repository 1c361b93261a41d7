//! Batch front end: JSON-configured verification campaigns and ASEP
//! computations with deterministic JSON reports.

pub mod campaigns;
pub mod config;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

pub use config::{Command, JobConfig};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] awcore::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// A finished job: the report bytes and, for `polytable`, the CSV table.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub bytes: Vec<u8>,
    pub all_pass: bool,
    pub table: Option<Vec<u8>>,
    pub table_path: Option<PathBuf>,
}

fn conventions(variant: Option<&str>) -> Value {
    json!({
        "mpa_variant": "jacobi_transfer_matrix",
        "mpa_form": "D1 = x0 (1 + d)/(1 - q), D0 = x0 (1 + J - d)/(1 - q), boundary vectors e0",
        "casimir_sign": "+",
        "casimir_form": "A+A- + (q^(N-1/2) + q^(-N+1/2)) / (q^(1/2) - q^(-1/2))^2",
        "serre_sign": "-",
        "omega_form": "-(q^(1/2) - q^(-1/2))^2 (k k* + l (u u* q^(1/2) + v* v q^(-1/2)))",
        "command_variant": variant,
    })
}

/// Runs one job. `command` must agree with the config; `seed` and `tol`
/// override the config values.
pub fn run(
    command: Command,
    config_text: &str,
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let job = JobConfig::parse(config_text)?;
    if job.command != command {
        return Err(CliError::Config(format!(
            "config is for {} but {} was requested",
            job.command.name(),
            command.name()
        )));
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Config(format!("tolerance must be positive, got {t}")));
        }
    }
    let seed = seed.or(job.seed).unwrap_or(DEFAULT_SEED);
    let f = match command {
        Command::VerifyYbe => campaigns::verify_ybe,
        Command::VerifyRll => campaigns::verify_rll,
        Command::VerifyAw => campaigns::verify_aw,
        Command::VerifyRe => campaigns::verify_re,
        Command::VerifyDualRe => campaigns::verify_dual_re,
        Command::VerifyBoundaryAw => campaigns::verify_boundary_aw,
        Command::VerifyCharges => campaigns::verify_charges,
        Command::AsepSolve => campaigns::asep_solve,
        Command::AsepOracleCompare => campaigns::asep_oracle_compare,
        Command::XxzSpectrum => campaigns::xxz_spectrum,
        Command::Polytable => campaigns::polytable,
    };
    let o = f(&job, seed, tol)?;
    let camp = o.campaign;
    let all_pass = camp.all_pass();
    let report = json!({
        "job": { "command": command.name(), "params": o.echo, "seed": seed, "tol_override": tol },
        "environment": { "tool": "awtool", "version": env!("CARGO_PKG_VERSION"), "seed": seed },
        "conventions": conventions(o.variant.as_deref()),
        "summary": { "checks": camp.checks.len(), "passed": camp.passed(), "all_pass": all_pass },
        "checks": camp.checks,
        "info": camp.info,
    });
    let bytes = report::to_bytes(&report);
    let (table, table_path) = match o.table {
        Some((path, t)) => {
            let p = path.map(PathBuf::from).or_else(|| out.map(|o| o.with_extension("csv")));
            (Some(t), p)
        }
        None => (None, None),
    };
    Ok(Outcome { report, bytes, all_pass, table, table_path })
}

/// Writes `bytes` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

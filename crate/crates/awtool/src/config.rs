//! Job configuration. Every struct rejects unknown keys and fills missing
//! ones with the documented defaults.

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyYbe,
    VerifyRll,
    VerifyAw,
    VerifyRe,
    VerifyDualRe,
    VerifyBoundaryAw,
    VerifyCharges,
    AsepSolve,
    AsepOracleCompare,
    XxzSpectrum,
    Polytable,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyYbe => "verify-ybe",
            Command::VerifyRll => "verify-rll",
            Command::VerifyAw => "verify-aw",
            Command::VerifyRe => "verify-re",
            Command::VerifyDualRe => "verify-dual-re",
            Command::VerifyBoundaryAw => "verify-boundary-aw",
            Command::VerifyCharges => "verify-charges",
            Command::AsepSolve => "asep-solve",
            Command::AsepOracleCompare => "asep-oracle-compare",
            Command::XxzSpectrum => "xxz-spectrum",
            Command::Polytable => "polytable",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Typed parameters for the command, with defaults for missing keys.
    pub fn params<P: DeserializeOwned>(&self) -> Result<P, CliError> {
        let v = if self.params.is_null() { serde_json::json!({}) } else { self.params.clone() };
        serde_json::from_value(v).map_err(|e| CliError::Config(format!("params for {}: {e}", self.command.name())))
    }
}

/// Parameters with a primary tolerance that `--tol` replaces.
pub trait Tolerance {
    fn set_tol(&mut self, tol: f64);
}

macro_rules! primary_tol {
    ($($t:ty),*) => {
        $(impl Tolerance for $t {
            fn set_tol(&mut self, tol: f64) {
                self.tol = tol;
            }
        })*
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesCfg {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyCfg {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub q: f64,
}

fn basic_poly() -> PolyCfg {
    PolyCfg { a: 0.3, b: -0.4, c: 0.5, d: 0.2, q: 0.37 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct YbeParams {
    pub q: Vec<f64>,
    pub grid: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub tol: f64,
}

impl Default for YbeParams {
    fn default() -> Self {
        Self { q: vec![0.3, 0.5, 0.7], grid: 10, z_min: 0.1, z_max: 10.0, tol: 1e-11 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RllParams {
    pub q: Vec<f64>,
    pub spins_twice: Vec<usize>,
    pub samples: usize,
    pub tol: f64,
}

impl Default for RllParams {
    fn default() -> Self {
        Self { q: vec![0.35, 0.8], spins_twice: vec![1, 2, 3], samples: 20, tol: 1e-11 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AwParams {
    pub q: Vec<f64>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub tol: f64,
    pub rho_tol: f64,
    pub coproduct_dims: Vec<[usize; 2]>,
    pub coproduct_samples: usize,
    pub coproduct_tol: f64,
    pub basic: PolyCfg,
    pub basic_n: usize,
    pub basic_tol: f64,
    pub poly_sets: Vec<PolyCfg>,
    pub d_max_degree: usize,
    pub d_tol: f64,
    pub recurrence_max_degree: usize,
    pub recurrence_x: Vec<f64>,
    pub recurrence_tol: f64,
    pub orthogonality_max_degree: usize,
    pub quad_points: usize,
    pub orthogonality_tol: f64,
}

impl Default for AwParams {
    fn default() -> Self {
        Self {
            q: vec![0.3, 0.7],
            dims: vec![2, 3, 4],
            samples: 10,
            tol: 1e-11,
            rho_tol: 1e-9,
            coproduct_dims: vec![[2, 2], [3, 2]],
            coproduct_samples: 5,
            coproduct_tol: 1e-12,
            basic: basic_poly(),
            basic_n: 40,
            basic_tol: 1e-9,
            poly_sets: vec![basic_poly(), PolyCfg { a: 0.6, b: 0.5, c: -0.35, d: -0.7, q: 0.5 }],
            d_max_degree: 8,
            d_tol: 1e-9,
            recurrence_max_degree: 20,
            recurrence_x: vec![-1.9, -0.75, 0.3, 1.3, 2.5],
            recurrence_tol: 1e-9,
            orthogonality_max_degree: 5,
            quad_points: 400,
            orthogonality_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReParams {
    pub q: Vec<f64>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub tol: f64,
    pub basic: PolyCfg,
    pub basic_n: usize,
    pub basic_samples: usize,
    pub basic_tol: f64,
    pub control_omega_factor: f64,
    pub control_floor: f64,
    pub variant: String,
}

impl Default for ReParams {
    fn default() -> Self {
        Self {
            q: vec![0.5],
            dims: vec![2, 3, 4],
            samples: 10,
            tol: 1e-11,
            basic: basic_poly(),
            basic_n: 40,
            basic_samples: 5,
            basic_tol: 1e-9,
            control_omega_factor: 1.05,
            control_floor: 1e-6,
            variant: "nominal".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundaryParams {
    pub rate_sets: Vec<RatesCfg>,
    pub random_rate_sets: usize,
    pub spins_twice: Vec<usize>,
    pub tol: f64,
    pub fit_tol: f64,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        Self { rate_sets: Vec::new(), random_rate_sets: 5, spins_twice: vec![1, 2], tol: 1e-10, fit_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChargeParams {
    pub rate_sets: Vec<RatesCfg>,
    pub random_rate_sets: usize,
    pub lengths: Vec<usize>,
    pub tol: f64,
    pub gauge_tol: f64,
}

impl Default for ChargeParams {
    fn default() -> Self {
        Self {
            rate_sets: Vec::new(),
            random_rate_sets: 3,
            lengths: vec![2, 3, 4, 5, 6],
            tol: 1e-11,
            gauge_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveParams {
    pub rates: RatesCfg,
    pub l: usize,
    pub tol: f64,
    pub oracle_tol: f64,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            rates: RatesCfg { alpha: 0.6, beta: 0.45, gamma: 0.1, delta: 0.2, q: 0.55 },
            l: 6,
            tol: 1e-10,
            oracle_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareParams {
    pub rate_sets: Vec<RatesCfg>,
    pub random_rate_sets: usize,
    pub lengths: Vec<usize>,
    pub tol: f64,
    pub current_tol: f64,
}

impl Default for CompareParams {
    fn default() -> Self {
        Self { rate_sets: Vec::new(), random_rate_sets: 5, lengths: (2..=8).collect(), tol: 1e-8, current_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct XxzParams {
    pub rate_sets: Vec<RatesCfg>,
    pub random_rate_sets: usize,
    pub lengths: Vec<usize>,
    pub mu: Vec<f64>,
    pub variant: String,
    pub tol: f64,
    pub mu_tol: f64,
}

impl Default for XxzParams {
    fn default() -> Self {
        Self {
            rate_sets: Vec::new(), random_rate_sets: 5,
            lengths: vec![2, 3, 4, 5, 6],
            mu: vec![0.5, 1.0, 2.0],
            variant: "ratio".into(),
            tol: 1e-8,
            mu_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolytableParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub q: f64,
    pub n_max: usize,
    pub x: Vec<f64>,
    /// CSV destination; defaults to the report path with a `.csv` extension.
    pub table: Option<String>,
    pub tol: f64,
}

impl Default for PolytableParams {
    fn default() -> Self {
        Self { a: 0.3, b: -0.4, c: 0.5, d: 0.2, q: 0.37, n_max: 10, x: vec![-1.5, -0.5, 0.0, 0.5, 1.5], table: None, tol: 1e-12 }
    }
}

primary_tol!(
    YbeParams,
    RllParams,
    AwParams,
    ReParams,
    BoundaryParams,
    ChargeParams,
    SolveParams,
    CompareParams,
    XxzParams,
    PolytableParams
);

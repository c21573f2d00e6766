//! Run configuration: a single JSON file and/or command-line flags, with
//! flags taking precedence field by field.

use std::path::PathBuf;

use serde::Deserialize;

use cperiod::convolution::Kernel;
use cperiod::descriptor::SignalDescriptor;
use cperiod::{Grid, UnitComplex};

use crate::CliError;

/// Grid triple in configs.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid, CliError> {
        Grid::new(self.start, self.end, self.step).map_err(CliError::from)
    }
}

/// Every field any subcommand consumes; unknown keys are rejected so a
/// typo cannot silently change a run.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub signal: Option<SignalDescriptor>,
    pub c: Option<UnitComplex>,
    pub epsilon: Option<f64>,
    pub tau: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_step: Option<f64>,
    pub grid: Option<GridConfig>,
    pub horizon: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub p_candidates: Option<Vec<f64>>,
    pub m_max: Option<u32>,
    pub p: Option<f64>,
    pub nodes_per_window: Option<usize>,
    pub op: Option<String>,
    pub freqs: Option<Vec<f64>>,
    pub threshold: Option<f64>,
    pub r: Option<f64>,
    pub t0: Option<f64>,
    pub count: Option<usize>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub mask: Option<f64>,
    pub phi: Option<f64>,
    pub target: Option<[f64; 2]>,
    pub k_count: Option<usize>,
    pub l_max: Option<u64>,
    pub kernel: Option<Kernel>,
    pub truncation: Option<f64>,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub halfline: Option<bool>,
    pub window: Option<f64>,
    pub coupling: Option<String>,
    pub strength: Option<f64>,
    pub max_iter: Option<u32>,
    pub allow_non_contraction: Option<bool>,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let raw = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&raw)
            .map_err(|e| CliError::validation(format!("invalid config {}: {e}", path.display())))
    }
}

/// `flag.or(file field)` with a named error when both are missing.
pub fn require<T: Clone>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::validation(format!("missing required parameter `{name}`")))
}

pub fn merge<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Parse an inline JSON signal descriptor.
pub fn parse_signal(json: &str) -> Result<SignalDescriptor, CliError> {
    serde_json::from_str(json)
        .map_err(|e| CliError::validation(format!("invalid signal descriptor: {e}")))
}

/// Parse an inline JSON multiplier `{re, im, arg_kind}`.
pub fn parse_multiplier(json: &str) -> Result<UnitComplex, CliError> {
    serde_json::from_str(json).map_err(|e| CliError::validation(format!("invalid multiplier: {e}")))
}

/// Parse an inline JSON kernel `{kind, ...}`.
pub fn parse_kernel(json: &str) -> Result<Kernel, CliError> {
    serde_json::from_str(json).map_err(|e| CliError::validation(format!("invalid kernel: {e}")))
}

/// Parse a comma-separated list of reals.
pub fn parse_list(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::validation(format!("invalid number `{s}`: {e}")))
        })
        .collect()
}

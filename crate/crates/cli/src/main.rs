//! `cperiod`: command-line laboratory for `c`-almost-periodic signals.
//!
//! Every subcommand reads its parameters from flags, from a JSON config
//! file (`--config run.json`), or both; flags override file fields.
//! Results are written as JSON (and CSV where a curve is produced),
//! atomically when a path is given.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure
//! (divergence, refused contraction, exhausted search). Errors are
//! mirrored as one JSON object on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::FileConfig;

/// Error carrying the exit-code family.
#[derive(Debug)]
pub struct CliError {
    pub numerical: bool,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            numerical: false,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            numerical: true,
            message: message.into(),
        }
    }
}

impl From<cperiod::Error> for CliError {
    fn from(e: cperiod::Error) -> Self {
        CliError {
            numerical: e.is_numerical(),
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cperiod",
    about = "Measure (epsilon, c)-period structure, Stepanov norms, spectra, convolutions, and contraction fixed points",
    version
)]
struct Cli {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Inline JSON signal descriptor, e.g. '{"name":"exponential","params":{"mu":1.0}}'.
    #[arg(long)]
    signal: Option<String>,
    /// Inline JSON multiplier '{"re":..,"im":..,"arg_kind":{...}}'.
    #[arg(long)]
    c: Option<String>,
    /// Grid as 'start,end,step'.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Horizon certifying builtin tail bounds.
    #[arg(long)]
    horizon: Option<f64>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output CSV path for curve data.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// List builtin signals and their parameters.
    SignalList,
    /// Defect sup_t ||f(t+tau) - c f(t)|| on a grid.
    Defect {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        tau: Option<f64>,
        /// Restrict to |t| >= mask and |t + tau| >= mask.
        #[arg(long)]
        mask: Option<f64>,
    },
    /// Scan shifts tau = k*tau_step for (epsilon, c)-periods.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        tau_max: Option<f64>,
        #[arg(long)]
        tau_step: Option<f64>,
    },
    /// Defects along a strictly increasing shift sequence.
    Recurrence {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated shifts.
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
    },
    /// Search for a semi-period p with all powers within epsilon.
    Semi {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Comma-separated candidate p values.
        #[arg(long, allow_hyphen_values = true)]
        p_candidates: Option<String>,
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Window L^p norm, defect, or scan.
    Stepanov {
        #[command(flatten)]
        common: CommonArgs,
        /// One of: norm, defect, scan.
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        nodes_per_window: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        tau_max: Option<f64>,
        #[arg(long)]
        tau_step: Option<f64>,
    },
    /// Frequencies whose Bohr coefficient clears a threshold.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated frequencies.
        #[arg(long, allow_hyphen_values = true)]
        freqs: Option<String>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Long-run mean (1/T) int_0^T e^{-irs} f(s) ds on a doubling ladder.
    Mean {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Approximate a unit-circle target by powers of an irrational rotation.
    Orbit {
        #[arg(long)]
        phi: Option<f64>,
        /// Target as 're,im'.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        k_count: Option<usize>,
        #[arg(long)]
        l_max: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convolve a kernel against a signal at one time or along a grid.
    Convolve {
        #[command(flatten)]
        common: CommonArgs,
        /// Inline JSON kernel, e.g. '{"kind":"exponential","omega":1.0}'.
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        truncation: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        /// Integrate from 0 instead of -infinity.
        #[arg(long)]
        halfline: bool,
    },
    /// Heat-kernel smoothing at diffusion time t0.
    Heat {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Contraction fixed point of u -> int R(t-s) F(s, u(s)) ds.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        kernel: Option<String>,
        /// Coupling g(u) added to the signal: none, sin-re, or identity.
        #[arg(long)]
        coupling: Option<String>,
        /// Coupling strength (the Lipschitz constant of strength * g).
        #[arg(long)]
        strength: Option<f64>,
        #[arg(long)]
        truncation: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<u32>,
        #[arg(long)]
        allow_non_contraction: bool,
        /// Comma-separated shifts for recurrence diagnostics of the solution.
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
    },
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("C_PERIOD_LAB_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            CliError::validation(format!(
                "C_PERIOD_LAB_THREADS = `{raw}` is not a thread count"
            ))
        })?;
        if n == 0 {
            return Err(CliError::validation(
                "C_PERIOD_LAB_THREADS must be at least 1",
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::validation(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    init_threads()?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let command = match cli.command {
        Some(c) => c,
        None => command_from_file(&file)?,
    };
    commands::dispatch(command, &file)
}

/// Build a flagless command from the config file's `command` field.
fn command_from_file(file: &FileConfig) -> Result<Command, CliError> {
    let name = file
        .command
        .clone()
        .ok_or_else(|| CliError::validation("no subcommand given and config has no `command`"))?;
    let common = CommonArgs::default();
    Ok(match name.as_str() {
        "signal-list" => Command::SignalList,
        "defect" => Command::Defect {
            common,
            tau: None,
            mask: None,
        },
        "scan" => Command::Scan {
            common,
            epsilon: None,
            tau_max: None,
            tau_step: None,
        },
        "recurrence" => Command::Recurrence {
            common,
            alphas: None,
        },
        "semi" => Command::Semi {
            common,
            epsilon: None,
            p_candidates: None,
            m_max: None,
        },
        "stepanov" => Command::Stepanov {
            common,
            op: None,
            p: None,
            nodes_per_window: None,
            tau: None,
            epsilon: None,
            tau_max: None,
            tau_step: None,
        },
        "spectrum" => Command::Spectrum {
            common,
            freqs: None,
            threshold: None,
            t0: None,
            count: None,
            step: None,
            tol: None,
        },
        "mean" => Command::Mean {
            common,
            r: None,
            t0: None,
            count: None,
            step: None,
            tol: None,
        },
        "orbit" => Command::Orbit {
            phi: None,
            target: None,
            epsilon: None,
            k_count: None,
            l_max: None,
            output: None,
        },
        "convolve" => Command::Convolve {
            common,
            kernel: None,
            t: None,
            truncation: None,
            step: None,
            halfline: false,
        },
        "heat" => Command::Heat {
            common,
            t0: None,
            x: None,
            window: None,
            step: None,
        },
        "solve" => Command::Solve {
            common,
            kernel: None,
            coupling: None,
            strength: None,
            truncation: None,
            tol: None,
            max_iter: None,
            allow_non_contraction: false,
            alphas: None,
        },
        other => return Err(CliError::validation(format!("unknown command `{other}`"))),
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = if e.numerical {
                "numerical"
            } else {
                "validation"
            };
            eprintln!(
                "{}",
                serde_json::json!({"error": {"kind": kind, "message": e.message}})
            );
            if e.numerical {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

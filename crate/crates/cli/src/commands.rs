//! Command implementations and artifact writing.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use cperiod::convolution::{convolve_halfline, convolve_line, heat_solution};
use cperiod::descriptor::SignalDescriptor;
use cperiod::orbit::orbit_approximants;
use cperiod::period::{
    defect, defect_beyond, recurrence_defects, scan_periods_with_curve, semi_c_check,
};
use cperiod::signal::Signal;
use cperiod::solver::{fixed_point_solve, recurrence_of_solution, Forcing, Trajectory};
use cperiod::spectrum::{bohr_coefficient, spectrum_scan, MeanSpec};
use cperiod::stepanov::{stepanov_defect, stepanov_norm, stepanov_scan_with_curve, StepanovParams};
use cperiod::{defaults, Builtin, Domain, Grid, UnitComplex};

use crate::config::{self, FileConfig, GridConfig};
use crate::{CliError, Command, CommonArgs};

pub fn dispatch(command: Command, file: &FileConfig) -> Result<(), CliError> {
    match command {
        Command::SignalList => signal_list(file),
        Command::Defect { common, tau, mask } => run_defect(&common, file, tau, mask),
        Command::Scan {
            common,
            epsilon,
            tau_max,
            tau_step,
        } => run_scan(&common, file, epsilon, tau_max, tau_step),
        Command::Recurrence { common, alphas } => run_recurrence(&common, file, alphas),
        Command::Semi {
            common,
            epsilon,
            p_candidates,
            m_max,
        } => run_semi(&common, file, epsilon, p_candidates, m_max),
        Command::Stepanov {
            common,
            op,
            p,
            nodes_per_window,
            tau,
            epsilon,
            tau_max,
            tau_step,
        } => run_stepanov(
            &common,
            file,
            op,
            p,
            nodes_per_window,
            tau,
            epsilon,
            tau_max,
            tau_step,
        ),
        Command::Spectrum {
            common,
            freqs,
            threshold,
            t0,
            count,
            step,
            tol,
        } => run_spectrum(&common, file, freqs, threshold, t0, count, step, tol),
        Command::Mean {
            common,
            r,
            t0,
            count,
            step,
            tol,
        } => run_mean(&common, file, r, t0, count, step, tol),
        Command::Orbit {
            phi,
            target,
            epsilon,
            k_count,
            l_max,
            output,
        } => run_orbit(file, phi, target, epsilon, k_count, l_max, output),
        Command::Convolve {
            common,
            kernel,
            t,
            truncation,
            step,
            halfline,
        } => run_convolve(&common, file, kernel, t, truncation, step, halfline),
        Command::Heat {
            common,
            t0,
            x,
            window,
            step,
        } => run_heat(&common, file, t0, x, window, step),
        Command::Solve {
            common,
            kernel,
            coupling,
            strength,
            truncation,
            tol,
            max_iter,
            allow_non_contraction,
            alphas,
        } => run_solve(
            &common,
            file,
            kernel,
            coupling,
            strength,
            truncation,
            tol,
            max_iter,
            allow_non_contraction,
            alphas,
        ),
    }
}

// ---- shared resolution -------------------------------------------------

fn resolve_descriptor(
    common: &CommonArgs,
    file: &FileConfig,
) -> Result<SignalDescriptor, CliError> {
    if let Some(raw) = &common.signal {
        return config::parse_signal(raw);
    }
    file.signal
        .clone()
        .ok_or_else(|| CliError::validation("missing required parameter `signal`"))
}

fn resolve_signal(common: &CommonArgs, file: &FileConfig) -> Result<Signal, CliError> {
    let descriptor = resolve_descriptor(common, file)?;
    let horizon = config::merge(common.horizon, file.horizon).unwrap_or(defaults::TAIL_HORIZON);
    descriptor
        .build_with_horizon(horizon)
        .map_err(CliError::from)
}

fn resolve_c(common: &CommonArgs, file: &FileConfig) -> Result<UnitComplex, CliError> {
    if let Some(raw) = &common.c {
        return config::parse_multiplier(raw);
    }
    file.c
        .ok_or_else(|| CliError::validation("missing required parameter `c`"))
}

fn parse_grid_flag(raw: &str) -> Result<GridConfig, CliError> {
    let parts = config::parse_list(raw)?;
    if parts.len() != 3 {
        return Err(CliError::validation("grid must be `start,end,step`"));
    }
    Ok(GridConfig {
        start: parts[0],
        end: parts[1],
        step: parts[2],
    })
}

fn resolve_grid(common: &CommonArgs, file: &FileConfig, signal: &Signal) -> Result<Grid, CliError> {
    if let Some(raw) = &common.grid {
        return parse_grid_flag(raw)?.build();
    }
    if let Some(gc) = &file.grid {
        return gc.build();
    }
    Ok(match signal.domain() {
        Domain::FullLine => defaults::full_line_grid(),
        Domain::HalfLine => defaults::half_line_grid(),
    })
}

// ---- artifact writing --------------------------------------------------

fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        CliError::validation(format!("cannot move into place {}: {e}", path.display()))
    })
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation(format!("serialization: {e}")))?;
    match path {
        Some(p) => atomic_write(p, &(text + "\n")),
        None => {
            use std::io::Write;
            // A closed pipe (e.g. piping into `head`) is not an error.
            match writeln!(std::io::stdout(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::validation(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    atomic_write(path, &out)
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::validation(format!("serialization: {e}")))
}

// ---- commands ----------------------------------------------------------

fn signal_list(file: &FileConfig) -> Result<(), CliError> {
    let catalog: Vec<serde_json::Value> = Builtin::catalog()
        .into_iter()
        .map(|(name, desc)| json!({"name": name, "description": desc}))
        .collect();
    write_json(file.output.as_deref(), &json!(catalog))
}

fn run_defect(
    common: &CommonArgs,
    file: &FileConfig,
    tau: Option<f64>,
    mask: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let c = resolve_c(common, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let tau = config::require(tau, file.tau, "tau")?;
    let mask = config::merge(mask, file.mask);
    let value = match mask {
        Some(m) => json!({
            "command": "defect",
            "tau": tau,
            "mask": m,
            "defect": defect_beyond(&signal, tau, &c, &grid, m)?,
        }),
        None => {
            let d = defect(&signal, tau, &c, &grid)?;
            json!({
                "command": "defect",
                "tau": tau,
                "defect": d.grid_max,
                "certified": d.certified,
            })
        }
    };
    write_json(common.output.as_deref().or(file.output.as_deref()), &value)
}

fn run_scan(
    common: &CommonArgs,
    file: &FileConfig,
    epsilon: Option<f64>,
    tau_max: Option<f64>,
    tau_step: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let c = resolve_c(common, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let epsilon = config::require(epsilon, file.epsilon, "epsilon")?;
    let tau_max = config::require(tau_max, file.tau_max, "tau_max")?;
    let tau_step = config::require(tau_step, file.tau_step, "tau_step")?;
    let (report, curve) = scan_periods_with_curve(&signal, &c, epsilon, tau_max, tau_step, &grid)?;
    if let Some(csv) = common.csv.as_deref().or(file.csv.as_deref()) {
        let rows: Vec<Vec<f64>> = curve.iter().map(|&(t, d)| vec![t, d]).collect();
        write_csv(csv, "tau,defect", &rows)?;
    }
    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &to_value(&report)?,
    )
}

fn run_recurrence(
    common: &CommonArgs,
    file: &FileConfig,
    alphas: Option<String>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let c = resolve_c(common, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let alphas = match alphas {
        Some(raw) => config::parse_list(&raw)?,
        None => file
            .alphas
            .clone()
            .ok_or_else(|| CliError::validation("missing required parameter `alphas`"))?,
    };
    let report = recurrence_defects(&signal, &c, &alphas, &grid)?;
    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &to_value(&report)?,
    )
}

fn run_semi(
    common: &CommonArgs,
    file: &FileConfig,
    epsilon: Option<f64>,
    p_candidates: Option<String>,
    m_max: Option<u32>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let c = resolve_c(common, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let epsilon = config::require(epsilon, file.epsilon, "epsilon")?;
    let candidates = match p_candidates {
        Some(raw) => config::parse_list(&raw)?,
        None => file
            .p_candidates
            .clone()
            .ok_or_else(|| CliError::validation("missing required parameter `p_candidates`"))?,
    };
    let m_max = config::require(m_max, file.m_max, "m_max")?;
    let out = semi_c_check(&signal, &c, epsilon, &candidates, m_max, &grid)?;
    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &to_value(&out)?,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_stepanov(
    common: &CommonArgs,
    file: &FileConfig,
    op: Option<String>,
    p: Option<f64>,
    nodes_per_window: Option<usize>,
    tau: Option<f64>,
    epsilon: Option<f64>,
    tau_max: Option<f64>,
    tau_step: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let op = config::require(op, file.op.clone(), "op")?;
    let p = config::require(p, file.p, "p")?;
    let mut params = StepanovParams::new(p)?;
    if let Some(nodes) = config::merge(nodes_per_window, file.nodes_per_window) {
        params = params.with_nodes(nodes)?;
    }
    let output = common.output.as_deref().or(file.output.as_deref());
    match op.as_str() {
        "norm" => {
            let value = stepanov_norm(&signal, &params, &grid)?;
            write_json(
                output,
                &json!({"command": "stepanov", "op": "norm", "p": p, "value": value}),
            )
        }
        "defect" => {
            let c = resolve_c(common, file)?;
            let tau = config::require(tau, file.tau, "tau")?;
            let value = stepanov_defect(&signal, tau, &c, &params, &grid)?;
            write_json(
                output,
                &json!({"command": "stepanov", "op": "defect", "p": p, "tau": tau, "value": value}),
            )
        }
        "scan" => {
            let c = resolve_c(common, file)?;
            let epsilon = config::require(epsilon, file.epsilon, "epsilon")?;
            let tau_max = config::require(tau_max, file.tau_max, "tau_max")?;
            let tau_step = config::require(tau_step, file.tau_step, "tau_step")?;
            let (report, curve) =
                stepanov_scan_with_curve(&signal, &c, epsilon, &params, tau_max, tau_step, &grid)?;
            if let Some(csv) = common.csv.as_deref().or(file.csv.as_deref()) {
                let rows: Vec<Vec<f64>> = curve.iter().map(|&(t, d)| vec![t, d]).collect();
                write_csv(csv, "tau,defect", &rows)?;
            }
            write_json(output, &to_value(&report)?)
        }
        other => Err(CliError::validation(format!(
            "unknown stepanov op `{other}` (expected norm, defect, or scan)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_spectrum(
    common: &CommonArgs,
    file: &FileConfig,
    freqs: Option<String>,
    threshold: Option<f64>,
    t0: Option<f64>,
    count: Option<usize>,
    step: Option<f64>,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let freqs = match freqs {
        Some(raw) => config::parse_list(&raw)?,
        None => file
            .freqs
            .clone()
            .ok_or_else(|| CliError::validation("missing required parameter `freqs`"))?,
    };
    let threshold = config::require(threshold, file.threshold, "threshold")?;
    let spec = mean_spec(file, t0, count, step, tol)?;
    let lines = spectrum_scan(&signal, &freqs, threshold, &spec)?;
    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &to_value(&lines)?,
    )
}

fn mean_spec(
    file: &FileConfig,
    t0: Option<f64>,
    count: Option<usize>,
    step: Option<f64>,
    tol: Option<f64>,
) -> Result<MeanSpec, CliError> {
    let t0 = config::require(t0, file.t0, "t0")?;
    let count = config::merge(count, file.count).unwrap_or(5);
    let step = config::merge(step, file.step).unwrap_or(defaults::MEAN_STEP);
    let tol = config::merge(tol, file.tol).unwrap_or(1e-4);
    MeanSpec::doubling(t0, count, step, tol).map_err(CliError::from)
}

fn run_mean(
    common: &CommonArgs,
    file: &FileConfig,
    r: Option<f64>,
    t0: Option<f64>,
    count: Option<usize>,
    step: Option<f64>,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let r = config::merge(r, file.r).unwrap_or(0.0);
    let spec = mean_spec(file, t0, count, step, tol)?;
    let est = bohr_coefficient(&signal, r, &spec)?;
    if let Some(csv) = common.csv.as_deref().or(file.csv.as_deref()) {
        let rows: Vec<Vec<f64>> = est.decay_curve().iter().map(|&(t, m)| vec![t, m]).collect();
        write_csv(csv, "horizon,mean_modulus", &rows)?;
    }
    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &to_value(&est)?,
    )
}

fn run_orbit(
    file: &FileConfig,
    phi: Option<f64>,
    target: Option<String>,
    epsilon: Option<f64>,
    k_count: Option<usize>,
    l_max: Option<u64>,
    output: Option<std::path::PathBuf>,
) -> Result<(), CliError> {
    let phi = config::require(phi, file.phi, "phi")?;
    let target = match target {
        Some(raw) => {
            let parts = config::parse_list(&raw)?;
            if parts.len() != 2 {
                return Err(CliError::validation("target must be `re,im`"));
            }
            Complex64::new(parts[0], parts[1])
        }
        None => {
            let [re, im] = file
                .target
                .ok_or_else(|| CliError::validation("missing required parameter `target`"))?;
            Complex64::new(re, im)
        }
    };
    let epsilon = config::require(epsilon, file.epsilon, "epsilon")?;
    let k_count = config::require(k_count, file.k_count, "k_count")?;
    let l_max = config::merge(l_max, file.l_max);
    let out = orbit_approximants(phi, target, epsilon, k_count, l_max)?;
    write_json(
        output.as_deref().or(file.output.as_deref()),
        &to_value(&out)?,
    )
}

fn resolve_kernel(
    flag: Option<String>,
    file: &FileConfig,
) -> Result<cperiod::convolution::Kernel, CliError> {
    if let Some(raw) = flag {
        return config::parse_kernel(&raw);
    }
    file.kernel
        .ok_or_else(|| CliError::validation("missing required parameter `kernel`"))
}

fn run_convolve(
    common: &CommonArgs,
    file: &FileConfig,
    kernel: Option<String>,
    t: Option<f64>,
    truncation: Option<f64>,
    step: Option<f64>,
    halfline: bool,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let kernel = resolve_kernel(kernel, file)?;
    kernel.validate()?;
    let step = config::merge(step, file.step).unwrap_or(0.001);
    let truncation = config::merge(truncation, file.truncation).unwrap_or_else(|| {
        kernel
            .truncation_for_tail(defaults::KERNEL_TAIL_TOL)
            .min(1.0e5)
    });
    let halfline = halfline || file.halfline.unwrap_or(false);
    let output = common.output.as_deref().or(file.output.as_deref());
    let single = config::merge(t, file.t);

    if let Some(t) = single {
        let conv = if halfline {
            convolve_halfline(&kernel, &signal, t, step)?
        } else {
            convolve_line(&kernel, &signal, t, truncation, step)?
        };
        return write_json(
            output,
            &json!({
                "command": "convolve",
                "t": t,
                "halfline": halfline,
                "result": to_value(&conv)?,
            }),
        );
    }

    // No single t: sweep the grid and emit a CSV curve.
    let grid = resolve_grid(common, file, &signal)?;
    let csv = common
        .csv
        .as_deref()
        .or(file.csv.as_deref())
        .ok_or_else(|| CliError::validation("grid sweep needs a `csv` output path"))?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut worst_tail = 0.0f64;
    for node in grid.nodes() {
        let conv = if halfline {
            if node <= 0.0 {
                continue;
            }
            convolve_halfline(&kernel, &signal, node, step)?
        } else {
            convolve_line(&kernel, &signal, node, truncation, step)?
        };
        worst_tail = worst_tail.max(conv.tail_bound);
        rows.push(vec![node, conv.value[0].re, conv.value[0].im]);
    }
    write_csv(csv, "t,re,im", &rows)?;
    write_json(
        output,
        &json!({
            "command": "convolve",
            "points": rows.len(),
            "halfline": halfline,
            "truncation": truncation,
            "tail_bound": worst_tail,
            "csv": csv.display().to_string(),
        }),
    )
}

fn run_heat(
    common: &CommonArgs,
    file: &FileConfig,
    t0: Option<f64>,
    x: Option<f64>,
    window: Option<f64>,
    step: Option<f64>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    let t0 = config::require(t0, file.t0, "t0")?;
    let kernel = cperiod::convolution::Kernel::GaussianHeat { t0 };
    kernel.validate()?;
    let window = config::merge(window, file.window)
        .unwrap_or_else(|| kernel.truncation_for_tail(defaults::KERNEL_TAIL_TOL));
    let step = config::merge(step, file.step).unwrap_or(0.002);
    let output = common.output.as_deref().or(file.output.as_deref());

    if let Some(x) = config::merge(x, file.x) {
        let out = heat_solution(&signal, t0, x, window, step)?;
        return write_json(
            output,
            &json!({"command": "heat", "t0": t0, "x": x, "result": to_value(&out)?}),
        );
    }
    let grid = resolve_grid(common, file, &signal)?;
    let csv = common
        .csv
        .as_deref()
        .or(file.csv.as_deref())
        .ok_or_else(|| CliError::validation("grid sweep needs a `csv` output path"))?;
    let mut rows = Vec::with_capacity(grid.len());
    for node in grid.nodes() {
        let out = heat_solution(&signal, t0, node, window, step)?;
        rows.push(vec![node, out.value[0].re, out.value[0].im]);
    }
    write_csv(csv, "x,re,im", &rows)?;
    write_json(
        output,
        &json!({"command": "heat", "t0": t0, "points": rows.len(), "csv": csv.display().to_string()}),
    )
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    common: &CommonArgs,
    file: &FileConfig,
    kernel: Option<String>,
    coupling: Option<String>,
    strength: Option<f64>,
    truncation: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<u32>,
    allow_non_contraction: bool,
    alphas: Option<String>,
) -> Result<(), CliError> {
    let signal = resolve_signal(common, file)?;
    if signal.dim() != 1 {
        return Err(CliError::validation(
            "solve currently drives scalar signals",
        ));
    }
    let kernel = resolve_kernel(kernel, file)?;
    let grid = resolve_grid(common, file, &signal)?;
    let coupling = config::merge(coupling, file.coupling.clone()).unwrap_or_else(|| "none".into());
    let strength = config::merge(strength, file.strength).unwrap_or(0.0);
    let tol = config::merge(tol, file.tol).unwrap_or(1e-8);
    let max_iter = config::merge(max_iter, file.max_iter).unwrap_or(64);
    let allow = allow_non_contraction || file.allow_non_contraction.unwrap_or(false);
    let truncation = config::merge(truncation, file.truncation).unwrap_or_else(|| {
        kernel
            .truncation_for_tail(defaults::KERNEL_TAIL_TOL)
            .min(1.0e5)
    });

    let lipschitz = match coupling.as_str() {
        "none" => 1e-12,
        "sin-re" | "identity" => strength.abs().max(1e-12),
        other => {
            return Err(CliError::validation(format!(
                "unknown coupling `{other}` (expected none, sin-re, or identity)"
            )))
        }
    };
    signal.check_grid(&grid, 0.0)?;
    let sig = signal.clone();
    let forcing = match coupling.as_str() {
        "none" => Forcing::scalar(lipschitz, "f(t)", move |t, _| sig.eval_unchecked(t)[0])?,
        "sin-re" => Forcing::scalar(lipschitz, "f(t) + s sin(Re u)", move |t, u| {
            sig.eval_unchecked(t)[0] + Complex64::new(strength * u.re.sin(), 0.0)
        })?,
        _ => Forcing::scalar(lipschitz, "f(t) + s u", move |t, u| {
            sig.eval_unchecked(t)[0] + strength * u
        })?,
    };

    let report = fixed_point_solve(
        &forcing,
        &kernel,
        Trajectory::zero(grid, 1),
        truncation,
        tol,
        max_iter,
        allow,
    )?;
    let trajectory = &report.trajectory;

    if let Some(csv) = common.csv.as_deref().or(file.csv.as_deref()) {
        let rows: Vec<Vec<f64>> = trajectory
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![grid.node(i), v[0].re, v[0].im])
            .collect();
        write_csv(csv, "t,re,im", &rows)?;
    }

    let alpha_list = match alphas.map(|raw| config::parse_list(&raw)).transpose()? {
        Some(list) => Some(list),
        None => file.alphas.clone(),
    };
    let recurrence = match alpha_list {
        Some(list) => {
            // Multiplier defaults to 1 for the diagnostics but an invalid
            // one must still be rejected, not silently replaced.
            let c = if common.c.is_some() || file.c.is_some() {
                resolve_c(common, file)?
            } else {
                UnitComplex::one()
            };
            Some(to_value(&recurrence_of_solution(trajectory, &c, &list)?)?)
        }
        None => None,
    };

    write_json(
        common.output.as_deref().or(file.output.as_deref()),
        &json!({
            "command": "solve",
            "iterations": trajectory.iterations,
            "residual": trajectory.residual,
            "M1": report.m1,
            "converged": trajectory.converged,
            "flagged": trajectory.flagged,
            "recurrence": recurrence,
        }),
    )
}

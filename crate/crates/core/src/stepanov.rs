//! Sliding-window `L^p` norms and window-metric period scans.
//!
//! The window lift replaces the pointwise value `f(t)` by the restriction
//! of `f` to `[t, t+1]` measured in `L^p`; defects and scans then run in
//! that metric. Window integrals use composite trapezoid quadrature whose
//! weights form a probability measure over the unit window, so power-mean
//! monotonicity in `p` holds exactly for the discretized values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults::NODES_PER_WINDOW;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numeric::{defect_norm, norm, trapezoid_weight};
use crate::period::PeriodScanReport;
use crate::signal::Signal;
use crate::unit_circle::UnitComplex;

/// Window exponent and quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepanovParams {
    pub p: f64,
    pub nodes_per_window: usize,
}

impl StepanovParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParam(format!(
                "Stepanov exponent p = {p} must be >= 1"
            )));
        }
        Ok(StepanovParams {
            p,
            nodes_per_window: NODES_PER_WINDOW,
        })
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        if nodes < 8 {
            return Err(Error::InvalidParam(
                "nodes_per_window must be at least 8".into(),
            ));
        }
        self.nodes_per_window = nodes;
        Ok(self)
    }
}

/// `(sum_i w_i g_i^p)^{1/p}` over one unit window, `w` the normalized
/// trapezoid weights.
fn window_lp<G: Fn(f64) -> f64>(t: f64, p: f64, nodes: usize, g: G) -> f64 {
    let h = 1.0 / (nodes - 1) as f64;
    let mut acc = 0.0;
    for j in 0..nodes {
        let w = trapezoid_weight(j, nodes) * h;
        acc += w * g(t + j as f64 * h).powf(p);
    }
    acc.powf(1.0 / p)
}

fn check_windows(signal: &Signal, window_starts: &Grid, shift: f64) -> Result<()> {
    signal.check_grid(window_starts, 0.0)?;
    signal.check_grid(window_starts, shift)?;
    Ok(())
}

/// `sup_t (int_t^{t+1} ||f||^p)^{1/p}` over the given window starts.
pub fn stepanov_norm(
    signal: &Signal,
    params: &StepanovParams,
    window_starts: &Grid,
) -> Result<f64> {
    check_windows(signal, window_starts, 0.0)?;
    let (p, nodes) = (params.p, params.nodes_per_window);
    Ok((0..window_starts.len())
        .into_par_iter()
        .map(|j| {
            window_lp(window_starts.node(j), p, nodes, |s| {
                norm(&signal.eval_unchecked(s))
            })
        })
        .reduce(|| f64::MIN, f64::max))
}

/// `sup_t (int_t^{t+1} ||f(s+tau) - c f(s)||^p ds)^{1/p}`: the defect of
/// the window lift.
pub fn stepanov_defect(
    signal: &Signal,
    tau: f64,
    c: &UnitComplex,
    params: &StepanovParams,
    window_starts: &Grid,
) -> Result<f64> {
    c.ensure_unit()?;
    if !(tau > 0.0) {
        return Err(Error::InvalidParam(format!("tau = {tau} must be positive")));
    }
    check_windows(signal, window_starts, tau)?;
    let cv = c.value();
    let (p, nodes) = (params.p, params.nodes_per_window);
    Ok((0..window_starts.len())
        .into_par_iter()
        .map(|j| {
            window_lp(window_starts.node(j), p, nodes, |s| {
                defect_norm(
                    &signal.eval_unchecked(s + tau),
                    &signal.eval_unchecked(s),
                    cv,
                )
            })
        })
        .reduce(|| f64::MIN, f64::max))
}

/// Window defect restricted to starts with `|t| >= m` and `|t + tau| >= m`:
/// the asymptotic (transient-masked) variant of the window metric. Used to
/// probe asymptotic window-recurrence without constructing an explicit
/// recurrent-plus-vanishing split.
pub fn stepanov_defect_beyond(
    signal: &Signal,
    tau: f64,
    c: &UnitComplex,
    params: &StepanovParams,
    window_starts: &Grid,
    m: f64,
) -> Result<f64> {
    c.ensure_unit()?;
    if !(tau > 0.0) {
        return Err(Error::InvalidParam(format!("tau = {tau} must be positive")));
    }
    check_windows(signal, window_starts, tau)?;
    let masked: Vec<f64> = window_starts
        .nodes()
        .filter(|&t| t.abs() >= m && (t + tau).abs() >= m)
        .collect();
    if masked.is_empty() {
        return Err(Error::EmptyMask { m });
    }
    let cv = c.value();
    let (p, nodes) = (params.p, params.nodes_per_window);
    Ok(masked
        .into_par_iter()
        .map(|t| {
            window_lp(t, p, nodes, |s| {
                defect_norm(
                    &signal.eval_unchecked(s + tau),
                    &signal.eval_unchecked(s),
                    cv,
                )
            })
        })
        .reduce(|| f64::MIN, f64::max))
}

/// Period scan in the window metric; the report records the exponent.
pub fn stepanov_scan_with_curve(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    params: &StepanovParams,
    tau_max: f64,
    tau_step: f64,
    window_starts: &Grid,
) -> Result<(PeriodScanReport, Vec<(f64, f64)>)> {
    c.ensure_unit()?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParam("epsilon must be positive".into()));
    }
    if !(tau_step > 0.0) || !(tau_max >= tau_step) {
        return Err(Error::InvalidParam(
            "need 0 < tau_step <= tau_max in a period scan".into(),
        ));
    }
    check_windows(signal, window_starts, 0.0)?;
    let count = (tau_max / tau_step).floor() as usize;
    let cv = c.value();
    let (p, nodes) = (params.p, params.nodes_per_window);
    let n = window_starts.len();
    let curve: Vec<(f64, f64)> = (1..=count)
        .into_par_iter()
        .map(|k| {
            let tau = k as f64 * tau_step;
            let mut worst = 0.0f64;
            for j in 0..n {
                let v = window_lp(window_starts.node(j), p, nodes, |s| {
                    defect_norm(
                        &signal.eval_unchecked(s + tau),
                        &signal.eval_unchecked(s),
                        cv,
                    )
                });
                worst = worst.max(v);
            }
            (tau, worst)
        })
        .collect();
    let report = PeriodScanReport::from_curve(
        c,
        epsilon,
        tau_max,
        tau_step,
        window_starts,
        &curve,
        Some(p),
    );
    Ok((report, curve))
}

pub fn stepanov_scan(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    params: &StepanovParams,
    tau_max: f64,
    tau_step: f64,
    window_starts: &Grid,
) -> Result<PeriodScanReport> {
    stepanov_scan_with_curve(signal, c, epsilon, params, tau_max, tau_step, window_starts)
        .map(|(r, _)| r)
}

//! `(epsilon, c)`-period measurement: defects, period scans, relative
//! density, recurrence sequences, semi-period checks, masked (asymptotic)
//! defects, and half-line extension.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numeric::{defect_norm, CVec};
use crate::signal::Signal;
use crate::unit_circle::UnitComplex;

/// Grid maximum of `||f(t + tau) - c f(t)||` with optional certified slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Defect {
    /// Max over grid nodes.
    pub grid_max: f64,
    /// `grid_max + L * step`: the shifted difference is `2L`-Lipschitz, so
    /// the sup over the continuous interval is at most this.
    pub certified: Option<f64>,
}

/// Max over grid nodes `t` of `||f(t + tau) - c f(t)||`.
pub fn defect(signal: &Signal, tau: f64, c: &UnitComplex, grid: &Grid) -> Result<Defect> {
    c.ensure_unit()?;
    if !(tau > 0.0) {
        return Err(Error::InvalidParam(format!("tau = {tau} must be positive")));
    }
    signal.check_grid(grid, 0.0)?;
    signal.check_grid(grid, tau)?;
    let cv = c.value();
    let grid_max = crate::numeric::par_max(grid.len(), |j| {
        let t = grid.node(j);
        defect_norm(
            &signal.eval_unchecked(t + tau),
            &signal.eval_unchecked(t),
            cv,
        )
    });
    Ok(Defect {
        grid_max,
        certified: signal.lipschitz().map(|l| grid_max + l * grid.step()),
    })
}

/// Scan report: which shifts `tau = k * tau_step <= tau_max` are
/// `(epsilon, c)`-periods on the grid, and how dense they sit.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodScanReport {
    pub c: UnitComplex,
    pub epsilon: f64,
    pub tau_step: f64,
    /// Accepted `(tau, defect)` pairs, `tau` strictly increasing.
    pub accepted: Vec<(f64, f64)>,
    /// Largest gap between consecutive accepted shifts, counting the
    /// boundary gaps from 0 and to `tau_max`. Equals `tau_max` when the
    /// accepted set is empty.
    pub max_gap: f64,
    /// Window `L^p` exponent when produced by a Stepanov scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip)]
    pub tau_max: f64,
    #[serde(skip)]
    pub grid: Grid,
}

impl PeriodScanReport {
    pub(crate) fn from_curve(
        c: &UnitComplex,
        epsilon: f64,
        tau_max: f64,
        tau_step: f64,
        grid: &Grid,
        curve: &[(f64, f64)],
        p: Option<f64>,
    ) -> Self {
        let accepted: Vec<(f64, f64)> = curve
            .iter()
            .copied()
            .filter(|&(_, d)| d <= epsilon)
            .collect();
        let max_gap = if accepted.is_empty() {
            tau_max
        } else {
            let mut gap = accepted[0].0; // boundary gap from 0
            for w in accepted.windows(2) {
                gap = gap.max(w[1].0 - w[0].0);
            }
            gap.max(tau_max - accepted.last().unwrap().0)
        };
        PeriodScanReport {
            c: *c,
            epsilon,
            tau_step,
            accepted,
            max_gap,
            p,
            tau_max,
            grid: *grid,
        }
    }
}

/// Evaluate the defect at every `tau = k * tau_step <= tau_max` and return
/// the report together with the full `(tau, defect)` curve.
pub fn scan_periods_with_curve(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    tau_max: f64,
    tau_step: f64,
    grid: &Grid,
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
    signal.check_grid(grid, 0.0)?;
    let count = (tau_max / tau_step).floor() as usize;
    let cv = c.value();
    let n = grid.len();
    // Base samples are shared by every tau.
    let base: Vec<CVec> = (0..n)
        .into_par_iter()
        .map(|j| signal.eval_unchecked(grid.node(j)))
        .collect();
    let curve: Vec<(f64, f64)> = (1..=count)
        .into_par_iter()
        .map(|k| {
            let tau = k as f64 * tau_step;
            let mut worst = 0.0f64;
            for (j, b) in base.iter().enumerate().take(n) {
                let shifted = signal.eval_unchecked(grid.node(j) + tau);
                worst = worst.max(defect_norm(&shifted, b, cv));
            }
            (tau, worst)
        })
        .collect();
    let report = PeriodScanReport::from_curve(c, epsilon, tau_max, tau_step, grid, &curve, None);
    Ok((report, curve))
}

/// As [`scan_periods_with_curve`], keeping only the report.
pub fn scan_periods(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    tau_max: f64,
    tau_step: f64,
    grid: &Grid,
) -> Result<PeriodScanReport> {
    scan_periods_with_curve(signal, c, epsilon, tau_max, tau_step, grid).map(|(r, _)| r)
}

/// Relative-density witness extracted from a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum RelativeDensity {
    /// Every subinterval of `[0, tau_max]` of length `l` met an accepted
    /// shift: a finite-horizon density witness.
    DenseWithL { l: f64 },
    /// Empty scan. A grid scan can witness density but never refute it.
    NotWitnessed,
}

pub fn relative_density(report: &PeriodScanReport) -> RelativeDensity {
    if report.accepted.is_empty() {
        RelativeDensity::NotWitnessed
    } else {
        RelativeDensity::DenseWithL { l: report.max_gap }
    }
}

/// Defects along a recurrence candidate sequence.
#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub alphas: Vec<f64>,
    pub defects: Vec<f64>,
}

/// `defects[n] = defect(signal, alphas[n], c, grid)` for a strictly
/// increasing positive sequence of shifts.
pub fn recurrence_defects(
    signal: &Signal,
    c: &UnitComplex,
    alphas: &[f64],
    grid: &Grid,
) -> Result<RecurrenceReport> {
    c.ensure_unit()?;
    if alphas.is_empty() {
        return Err(Error::InvalidParam("alphas must be nonempty".into()));
    }
    if alphas[0] <= 0.0 || alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParam(
            "alphas must be strictly increasing and positive".into(),
        ));
    }
    let defects = alphas
        .iter()
        .map(|&a| defect(signal, a, c, grid).map(|d| d.grid_max))
        .collect::<Result<Vec<f64>>>()?;
    Ok(RecurrenceReport {
        alphas: alphas.to_vec(),
        defects,
    })
}

/// Result of a semi-period search.
#[derive(Debug, Clone, Serialize)]
pub struct SemiCheck {
    /// First candidate `p` whose powers all stay within `epsilon`, with the
    /// worst defect over `m = 1..=m_max`.
    pub found: Option<(f64, f64)>,
    /// Number of powers tested per candidate.
    pub m_tested: u32,
}

/// Search `p_candidates` for a `p` with
/// `defect(signal, m p, c^m) <= epsilon` for every `m = 1..=m_max`.
/// Only positive powers are tested; on the full line the negative powers
/// follow from the positive ones by the substitution `x -> x - mp`.
pub fn semi_c_check(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    p_candidates: &[f64],
    m_max: u32,
    grid: &Grid,
) -> Result<SemiCheck> {
    c.ensure_unit()?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParam("epsilon must be positive".into()));
    }
    if m_max == 0 {
        return Err(Error::InvalidParam("m_max must be at least 1".into()));
    }
    for &p in p_candidates {
        if !(p > 0.0) {
            return Err(Error::InvalidParam(format!(
                "candidate p = {p} must be positive"
            )));
        }
        let mut worst = 0.0f64;
        let mut ok = true;
        for m in 1..=m_max {
            let d = defect(signal, m as f64 * p, &c.pow(m as i64), grid)?.grid_max;
            worst = worst.max(d);
            if d > epsilon {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(SemiCheck {
                found: Some((p, worst)),
                m_tested: m_max,
            });
        }
    }
    Ok(SemiCheck {
        found: None,
        m_tested: m_max,
    })
}

/// Both sides of the telescoping power bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerDefectBound {
    /// `defect(f, l tau, c^l)` on the given grid.
    pub lhs: f64,
    /// `l * defect(f, tau, c)` on the grid extended by `(l-1) tau`, which
    /// covers every intermediate point the telescoping sum visits.
    pub rhs: f64,
}

/// Telescoping estimate: the `l`-fold defect against `c^l` is at most `l`
/// times the single-step defect, up to grid slack.
pub fn power_defect_bound(
    signal: &Signal,
    c: &UnitComplex,
    tau: f64,
    l: u32,
    grid: &Grid,
) -> Result<PowerDefectBound> {
    if l == 0 {
        return Err(Error::InvalidParam("l must be at least 1".into()));
    }
    let lhs = defect(signal, l as f64 * tau, &c.pow(l as i64), grid)?.grid_max;
    let extended = grid.extended((l as f64 - 1.0) * tau)?;
    let rhs = l as f64 * defect(signal, tau, c, &extended)?.grid_max;
    Ok(PowerDefectBound { lhs, rhs })
}

/// Certify the accepted shifts of a scan against `c^{l_k}` as
/// `(epsilon, c')`-periods, by the triangle inequality
/// `||f(t+tau) - c' f(t)|| <= ||f(t+tau) - c^{l_k} f(t)|| + |c^{l_k} - c'| ||f||_inf`.
///
/// Requires `base.epsilon <= epsilon / 2` and
/// `|c^{l_k} - c'| < epsilon / (2 ||f||_inf)`.
pub fn transfer_periods(
    base: &PeriodScanReport,
    c_prime: &UnitComplex,
    sup_norm_f: f64,
    epsilon: f64,
) -> Result<Vec<f64>> {
    base.c.ensure_unit()?;
    c_prime.ensure_unit()?;
    if !(sup_norm_f > 0.0) {
        return Err(Error::InvalidParam("sup_norm_f must be positive".into()));
    }
    if base.epsilon > epsilon / 2.0 {
        return Err(Error::Transfer(format!(
            "base scan epsilon {} exceeds epsilon/2 = {}",
            base.epsilon,
            epsilon / 2.0
        )));
    }
    let dist = (base.c.value() - c_prime.value()).norm();
    let allowed = epsilon / (2.0 * sup_norm_f);
    if dist >= allowed {
        return Err(Error::Transfer(format!(
            "|c^l - c'| = {dist} is not below epsilon/(2 ||f||) = {allowed}"
        )));
    }
    Ok(base.accepted.iter().map(|&(tau, _)| tau).collect())
}

/// Max of `||f(t + tau) - c f(t)||` over grid nodes with `|t| >= m` and
/// `|t + tau| >= m`: the defect seen far from the origin.
pub fn defect_beyond(
    signal: &Signal,
    tau: f64,
    c: &UnitComplex,
    grid: &Grid,
    m: f64,
) -> Result<f64> {
    c.ensure_unit()?;
    if !(tau > 0.0) {
        return Err(Error::InvalidParam(format!("tau = {tau} must be positive")));
    }
    signal.check_grid(grid, 0.0)?;
    signal.check_grid(grid, tau)?;
    let cv = c.value();
    let masked: Vec<usize> = (0..grid.len())
        .filter(|&j| {
            let t = grid.node(j);
            t.abs() >= m && (t + tau).abs() >= m
        })
        .collect();
    if masked.is_empty() {
        return Err(Error::EmptyMask { m });
    }
    Ok(masked
        .into_par_iter()
        .map(|j| {
            let t = grid.node(j);
            defect_norm(
                &signal.eval_unchecked(t + tau),
                &signal.eval_unchecked(t),
                cv,
            )
        })
        .reduce(|| f64::MIN, f64::max))
}

/// Value extended to a negative abscissa through one period application.
#[derive(Debug, Clone, Serialize)]
pub struct Extension {
    #[serde(serialize_with = "crate::numeric::serialize_cvec")]
    pub value: CVec,
    /// Shift used: the smallest accepted `tau >= |x|` within tolerance.
    pub tau: f64,
    /// One application of the `(epsilon, c)`-period relation costs at most
    /// `epsilon` against the true extension.
    pub error_bound: f64,
}

/// Extend a half-line signal to `x < 0` as `c^{-1} f(x + tau)` for the
/// smallest accepted period `tau >= |x|`.
pub fn extend_half_line(
    signal: &Signal,
    c: &UnitComplex,
    epsilon: f64,
    x: f64,
    report: &PeriodScanReport,
) -> Result<Extension> {
    c.ensure_unit()?;
    if signal.domain() != crate::signal::Domain::HalfLine {
        return Err(Error::SignalMismatch(
            "extension applies to half-line signals".into(),
        ));
    }
    if (report.c.value() - c.value()).norm() > crate::defaults::UNIT_MODULUS_TOL {
        return Err(Error::InvalidParam(
            "scan report was taken against a different multiplier".into(),
        ));
    }
    if x >= 0.0 {
        return Err(Error::InvalidParam(format!(
            "x = {x} is already in the half-line domain"
        )));
    }
    let needed = -x;
    let tau = report
        .accepted
        .iter()
        .find(|&&(tau, d)| tau >= needed && d <= epsilon)
        .map(|&(tau, _)| tau)
        .ok_or(Error::Extension { needed, epsilon })?;
    let shifted = signal.eval(x + tau)?;
    let inv = c.recip().value();
    let value: CVec = shifted.iter().map(|z| inv * z).collect();
    Ok(Extension {
        value,
        tau,
        error_bound: epsilon,
    })
}

//! Long-run means: Cesàro averages, Bohr–Fourier coefficients, spectrum
//! estimation, and the vanishing-mean test for nontrivial multipliers.
//!
//! A limit is never asserted: means are computed at an increasing ladder
//! of horizons and declared converged only when consecutive values agree
//! within the requested tolerance.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{norm, CVec};
use crate::orbit::root_structure;
use crate::period::PeriodScanReport;
use crate::signal::Signal;
use crate::unit_circle::{ArgKind, UnitComplex};

/// Horizon ladder and quadrature resolution for mean estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSpec {
    pub horizons: Vec<f64>,
    pub step: f64,
    pub tol: f64,
}

impl MeanSpec {
    pub fn new(horizons: Vec<f64>, step: f64, tol: f64) -> Result<Self> {
        if horizons.is_empty() {
            return Err(Error::InvalidParam("need at least one horizon".into()));
        }
        if horizons[0] <= 0.0 || horizons.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParam(
                "horizons must be strictly increasing and positive".into(),
            ));
        }
        if !(step > 0.0) || !(tol > 0.0) {
            return Err(Error::InvalidParam("step and tol must be positive".into()));
        }
        Ok(MeanSpec {
            horizons,
            step,
            tol,
        })
    }

    /// Doubling ladder `t0, 2 t0, 4 t0, ...` with `count` rungs.
    pub fn doubling(t0: f64, count: usize, step: f64, tol: f64) -> Result<Self> {
        if count == 0 || count > 48 {
            return Err(Error::InvalidParam(
                "doubling ladder needs 1..=48 rungs".into(),
            ));
        }
        MeanSpec::new(
            (0..count).map(|k| t0 * (1u64 << k) as f64).collect(),
            step,
            tol,
        )
    }
}

/// Mean values along a horizon ladder, with a convergence verdict.
#[derive(Debug, Clone, Serialize)]
pub struct MeanEstimate {
    /// Realized horizons (each rounded to a whole number of steps).
    pub horizons: Vec<f64>,
    #[serde(serialize_with = "crate::numeric::serialize_cvec_list")]
    pub values: Vec<CVec>,
    /// Whether the last two ladder values agree within `tol`.
    pub converged: bool,
    #[serde(serialize_with = "crate::numeric::serialize_opt_cvec")]
    pub limit: Option<CVec>,
    pub tol: f64,
}

impl MeanEstimate {
    pub fn last_value(&self) -> &CVec {
        self.values.last().expect("ladder is nonempty")
    }

    /// `(horizon, ||mean||)` pairs for decay plots.
    pub fn decay_curve(&self) -> Vec<(f64, f64)> {
        self.horizons
            .iter()
            .zip(&self.values)
            .map(|(&t, v)| (t, norm(v)))
            .collect()
    }
}

/// Integrand values accumulated incrementally over a node ladder.
fn ladder_means<G>(spec: &MeanSpec, dim: usize, g: G) -> (Vec<f64>, Vec<CVec>)
where
    G: Fn(f64) -> CVec + Sync,
{
    let h = spec.step;
    let node_counts: Vec<usize> = spec
        .horizons
        .iter()
        .map(|&t| ((t / h).round() as usize).max(2))
        .collect();
    let g0 = g(0.0);
    let mut sums: CVec = g0.clone();
    let mut processed = 1usize; // nodes 0..processed have been added to sums
    let mut horizons = Vec::with_capacity(node_counts.len());
    let mut values = Vec::with_capacity(node_counts.len());
    for &n in &node_counts {
        // Extend the running full-weight sum to node index n.
        if n >= processed {
            let seg = crate::numeric::chunked_sum_cvec(n + 1 - processed, 1 << 14, dim, |j| {
                g((processed + j) as f64 * h)
            });
            for (a, z) in sums.iter_mut().zip(seg.iter()) {
                *a += z;
            }
            processed = n + 1;
        }
        let t = n as f64 * h;
        let g_end = g(t);
        let value: CVec = (0..dim)
            .map(|d| (sums[d] - 0.5 * (g0[d] + g_end[d])) * h / t)
            .collect();
        horizons.push(t);
        values.push(value);
    }
    (horizons, values)
}

/// Bohr–Fourier coefficient estimate
/// `P_r(f) ~ (1/T) int_0^T e^{-i r s} f(s) ds` along the horizon ladder.
pub fn bohr_coefficient(signal: &Signal, r: f64, spec: &MeanSpec) -> Result<MeanEstimate> {
    if !r.is_finite() {
        return Err(Error::InvalidParam("frequency must be finite".into()));
    }
    let dim = signal.dim();
    let (horizons, values) = ladder_means(spec, dim, |s| {
        let twist = Complex64::cis(-r * s);
        signal.eval_unchecked(s).iter().map(|z| twist * z).collect()
    });
    let converged = values.len() >= 2 && {
        let a = &values[values.len() - 1];
        let b = &values[values.len() - 2];
        crate::numeric::diff_norm(a, b) <= spec.tol
    };
    Ok(MeanEstimate {
        limit: converged.then(|| values.last().unwrap().clone()),
        horizons,
        values,
        converged,
        tol: spec.tol,
    })
}

/// Cesàro mean `(1/T) int_0^T f`: the `r = 0` coefficient.
pub fn cesaro_mean(signal: &Signal, spec: &MeanSpec) -> Result<MeanEstimate> {
    bohr_coefficient(signal, 0.0, spec)
}

/// One candidate spectral line.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumLine {
    pub r: f64,
    #[serde(serialize_with = "crate::numeric::serialize_cvec")]
    pub value: CVec,
    pub modulus: f64,
    pub converged: bool,
}

/// Frequencies whose converged coefficient estimate clears the threshold.
pub fn spectrum_scan(
    signal: &Signal,
    freqs: &[f64],
    threshold: f64,
    spec: &MeanSpec,
) -> Result<Vec<SpectrumLine>> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidParam("threshold must be positive".into()));
    }
    let mut lines = Vec::new();
    for &r in freqs {
        let est = bohr_coefficient(signal, r, spec)?;
        let value = est.last_value().clone();
        let modulus = norm(&value);
        if est.converged && modulus >= threshold {
            lines.push(SpectrumLine {
                r,
                value,
                modulus,
                converged: est.converged,
            });
        }
    }
    Ok(lines)
}

/// Outcome of the vanishing-mean test.
#[derive(Debug, Clone, Serialize)]
pub struct MeanZeroCheck {
    pub passes: bool,
    /// Mean modulus at the final horizon.
    pub final_mean: f64,
    /// Bound the mean must stay under, derived from the scan epsilon:
    /// `A (eps (1/Q + 1/n) + sup||f|| / n)` at the final `n`, plus a fixed
    /// quadrature cushion.
    pub threshold: f64,
    /// Order `Q` of the multiplier (`c^Q = 1`).
    pub order: u64,
    /// Telescoping constant `A = sum_{j<=Q-2} |1 + c + ... + c^j|`.
    pub a_const: f64,
    /// Accepted shift used to build the horizons `n * tau`.
    pub tau: f64,
    /// `(T, ||mean(T)||)` decay curve.
    pub decay: Vec<(f64, f64)>,
}

/// Test that the long-run mean of a `c`-almost periodic signal vanishes
/// (`c != 1`, rational argument), at the rate the accepted periods allow.
///
/// Horizons are `n * tau` for `n = 1, 2, 4, ..., 2^n_doublings`, with `tau`
/// the accepted shift of smallest defect. The pass threshold at the final
/// `n` comes from telescoping the period relation over blocks of length
/// `Q = ord(c)` and bounding the roots-of-unity partial sums.
pub fn mean_zero_check(
    signal: &Signal,
    c: &UnitComplex,
    scan: &PeriodScanReport,
    n_doublings: usize,
    step: f64,
) -> Result<MeanZeroCheck> {
    c.ensure_unit()?;
    let ArgKind::Rational { p, .. } = c.arg_kind() else {
        return Err(Error::WrongKind {
            expected: "rational argument",
        });
    };
    if p == 0 {
        return Err(Error::InvalidParam(
            "mean-zero test requires c != 1 (c = 1 means carry the ordinary mean)".into(),
        ));
    }
    let (tau, _) = scan
        .accepted
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::EmptyScan("mean-zero test needs an accepted period".into()))?;

    let order = root_structure(c)?.order;
    let mut a_const = 0.0;
    let mut partial = Complex64::new(0.0, 0.0);
    for j in 0..order.saturating_sub(1) {
        partial += c.pow(j as i64).value();
        a_const += partial.norm();
    }
    let a_const = a_const.max(1.0);

    if n_doublings > 48 {
        return Err(Error::InvalidParam(
            "mean-zero ladder supports at most 48 doublings".into(),
        ));
    }
    let ns: Vec<u64> = (0..=n_doublings).map(|k| 1u64 << k).collect();
    let spec = MeanSpec::new(
        ns.iter().map(|&n| n as f64 * tau).collect(),
        step,
        1.0, // convergence verdict unused here; the threshold decides
    )?;
    let est = cesaro_mean(signal, &spec)?;
    let decay = est.decay_curve();
    let final_mean = decay.last().unwrap().1;

    // Scale for the boundary term: grid max of ||f|| over the nodes already
    // visited by the quadrature.
    let n_nodes = ((spec.horizons.last().unwrap() / step).round() as usize).max(2);
    let sup_f = crate::numeric::par_max(n_nodes + 1, |j| {
        norm(&signal.eval_unchecked(j as f64 * step))
    });

    let n_final = *ns.last().unwrap() as f64;
    let threshold =
        a_const * (scan.epsilon * (1.0 / order as f64 + 1.0 / n_final) + sup_f / n_final) + 1e-6;
    Ok(MeanZeroCheck {
        passes: final_mean <= threshold,
        final_mean,
        threshold,
        order,
        a_const,
        tau,
        decay,
    })
}

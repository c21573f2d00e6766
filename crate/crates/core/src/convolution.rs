//! Kernel families, window summability, and convolution products.
//!
//! Kernels are scalar nonnegative functions on `(0, inf)` acting as
//! `R(u) * identity`; every norm inequality the invariance results use
//! survives that specialization while staying computable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{norm, CVec};
use crate::signal::{Domain, Signal};

/// Scalar convolution kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Kernel {
    /// `e^{-omega u}`, `omega > 0`. Mass `1/omega`.
    Exponential { omega: f64 },
    /// `u^{gamma-1}` for `u <= 1`, `u^{-gamma-1}` for `u > 1`,
    /// `gamma in (0,1)`: continuous at `u = 1`, integrable with mass
    /// `2/gamma`, weakly singular at the origin.
    Fractional { gamma: f64 },
    /// `e^{-u^2/(4 t0)} / (2 sqrt(pi t0))`, `t0 > 0`: half of the heat
    /// kernel at time `t0`; one-sided mass `1/2`.
    GaussianHeat { t0: f64 },
}

impl Kernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Kernel::Exponential { omega } => {
                if !(omega > 0.0) {
                    return Err(Error::InvalidParam(format!(
                        "omega = {omega} must be positive"
                    )));
                }
            }
            Kernel::Fractional { gamma } => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    return Err(Error::InvalidParam(format!(
                        "gamma = {gamma} must lie in (0, 1)"
                    )));
                }
            }
            Kernel::GaussianHeat { t0 } => {
                if !(t0 > 0.0) {
                    return Err(Error::InvalidParam(format!("t0 = {t0} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// Kernel value at `u > 0`.
    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            Kernel::Exponential { omega } => (-omega * u).exp(),
            Kernel::Fractional { gamma } => {
                if u <= 1.0 {
                    u.powf(gamma - 1.0)
                } else {
                    u.powf(-gamma - 1.0)
                }
            }
            Kernel::GaussianHeat { t0 } => {
                (-u * u / (4.0 * t0)).exp() / (2.0 * (std::f64::consts::PI * t0).sqrt())
            }
        }
    }

    /// `int_0^inf eval`.
    pub fn mass(&self) -> f64 {
        match *self {
            Kernel::Exponential { omega } => 1.0 / omega,
            Kernel::Fractional { gamma } => 2.0 / gamma,
            Kernel::GaussianHeat { .. } => 0.5,
        }
    }

    /// Upper bound for `int_T^inf eval` (exact for the first two kinds).
    pub fn tail_mass(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.mass();
        }
        match *self {
            Kernel::Exponential { omega } => (-omega * t).exp() / omega,
            Kernel::Fractional { gamma } => {
                if t >= 1.0 {
                    t.powf(-gamma) / gamma
                } else {
                    (2.0 - t.powf(gamma)) / gamma
                }
            }
            Kernel::GaussianHeat { t0 } => {
                // erfc bound: int_T^inf <= e^{-T^2/(4 t0)} sqrt(t0/pi) / T.
                ((-t * t / (4.0 * t0)).exp() * (t0 / std::f64::consts::PI).sqrt() / t).min(0.5)
            }
        }
    }

    /// Truncation `T` with `tail_mass(T) <= rel_tol * mass()`, found by
    /// growing an analytic first guess until the certified tail complies.
    pub fn truncation_for_tail(&self, rel_tol: f64) -> f64 {
        let target = rel_tol * self.mass();
        let mut t = match *self {
            Kernel::Exponential { omega } => (1.0 / (target * omega)).ln().max(1.0) / omega,
            Kernel::Fractional { gamma } => (1.0 / (target * gamma)).powf(1.0 / gamma).max(1.0),
            Kernel::GaussianHeat { t0 } => 2.0 * (t0 * (1.0 / rel_tol).ln()).sqrt().max(1.0),
        };
        while self.tail_mass(t) > target && t < 1.0e300 {
            t *= 1.25;
        }
        t
    }
}

/// Gejacina exponent `(gamma - 1) q / (q - 1)`: the window-summability
/// condition for the fractional kernel demands this stay above `-1`, which
/// is exactly integrability of `eval^{q'}` at the origin for the conjugate
/// exponent `q' = q / (q - 1)`.
pub fn gejacina_exponent(gamma: f64, q: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::InvalidParam(format!("q = {q} must exceed 1")));
    }
    Ok((gamma - 1.0) * q / (q - 1.0))
}

pub fn gejacina_holds(gamma: f64, q: f64) -> Result<bool> {
    Ok(gejacina_exponent(gamma, q)? > -1.0)
}

/// Certified window sum `M = sum_k (int_k^{k+1} eval^q)^{1/q}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowSum {
    /// Partial sum plus the tail bound: a certified upper value for `M`.
    pub value: f64,
    /// Number of windows summed explicitly.
    pub windows: usize,
    /// Analytic bound on the discarded tail, already folded into `value`.
    pub tail_bound: f64,
}

/// Window budget for [`kernel_q_tail`]; the fractional kernel's window
/// norms decay like `k^{-(gamma+1)}`, so the sum tail shrinks only
/// polynomially and is closed with an analytic bound instead of iteration.
const MAX_WINDOWS: usize = 1_000_000;

/// `sum_k ||R||_{L^q[k, k+1]}`, truncated when the analytic tail bound
/// drops below `1e-12` (or the window budget runs out, in which case the
/// bound is added to keep the value certified).
pub fn kernel_q_tail(kernel: &Kernel, q: f64) -> Result<WindowSum> {
    kernel.validate()?;
    if !(q >= 1.0) {
        return Err(Error::InvalidParam(format!("q = {q} must be >= 1")));
    }
    if let Kernel::Fractional { gamma } = *kernel {
        let exponent = (gamma - 1.0) * q;
        if exponent <= -1.0 {
            return Err(Error::SingularWindow { exponent });
        }
    }
    let mut value = 0.0;
    let mut k = 0usize;
    loop {
        let tail = window_sum_tail(kernel, q, k);
        if tail < 1e-12 || k >= MAX_WINDOWS {
            return Ok(WindowSum {
                value: value + tail,
                windows: k,
                tail_bound: tail,
            });
        }
        value += window_norm(kernel, q, k);
        k += 1;
    }
}

/// Convenience for the conjugate-exponent use: the window sum the
/// fixed-point theory needs is `kernel_q_tail(kernel, q/(q-1))`.
pub fn kernel_q_tail_conjugate(kernel: &Kernel, q: f64) -> Result<WindowSum> {
    if !(q > 1.0) {
        return Err(Error::InvalidParam(format!("q = {q} must exceed 1")));
    }
    kernel_q_tail(kernel, q / (q - 1.0))
}

/// `(int_k^{k+1} eval^q)^{1/q}` by closed form where available.
fn window_norm(kernel: &Kernel, q: f64, k: usize) -> f64 {
    let (a, b) = (k as f64, k as f64 + 1.0);
    match *kernel {
        Kernel::Exponential { omega } => {
            let oq = omega * q;
            (((-oq * a).exp() - (-oq * b).exp()) / oq).powf(1.0 / q)
        }
        Kernel::Fractional { gamma } => {
            if k == 0 {
                // int_0^1 u^{(gamma-1)q} du, convergent by the caller's gate.
                (1.0 / ((gamma - 1.0) * q + 1.0)).powf(1.0 / q)
            } else {
                let e = (gamma + 1.0) * q;
                ((a.powf(1.0 - e) - b.powf(1.0 - e)) / (e - 1.0)).powf(1.0 / q)
            }
        }
        Kernel::GaussianHeat { t0 } => {
            // Smooth integrand: trapezoid on the window.
            let nodes = 129;
            let h = 1.0 / (nodes - 1) as f64;
            let pref = 1.0 / (2.0 * (std::f64::consts::PI * t0).sqrt());
            let mut acc = 0.0;
            for j in 0..nodes {
                let u = a + j as f64 * h;
                let w = crate::numeric::trapezoid_weight(j, nodes);
                acc += w * h * (-u * u * q / (4.0 * t0)).exp();
            }
            pref * acc.powf(1.0 / q)
        }
    }
}

/// Upper bound for `sum_{j >= k} window_norm(j)`.
fn window_sum_tail(kernel: &Kernel, q: f64, k: usize) -> f64 {
    let a = k as f64;
    match *kernel {
        Kernel::Exponential { omega } => {
            // Geometric with ratio e^{-omega}.
            window_norm_bound_exp(omega, q, a) / (1.0 - (-omega).exp())
        }
        Kernel::Fractional { gamma } => {
            if k == 0 {
                // Not meaningful before the singular window is summed.
                f64::INFINITY
            } else {
                // window_norm(j) <= j^{-(gamma+1)}; compare with the integral.
                a.powf(-(gamma + 1.0)) + a.powf(-gamma) / gamma
            }
        }
        Kernel::GaussianHeat { t0 } => {
            if a < 1.0 {
                return f64::INFINITY;
            }
            // window_norm(j) <= pref e^{-j^2/(4 t0)}, decreasing in j, so the
            // sum is at most its first term plus the comparison integral
            // int_a^inf pref e^{-u^2/(4 t0)} du <= pref e^{-a^2/(4 t0)} 2 t0 / a.
            let pref = 1.0 / (2.0 * (std::f64::consts::PI * t0).sqrt());
            let first = pref * (-a * a / (4.0 * t0)).exp();
            first * (1.0 + 2.0 * t0 / a)
        }
    }
}

fn window_norm_bound_exp(omega: f64, q: f64, a: f64) -> f64 {
    let oq = omega * q;
    (((-oq * a).exp() * (1.0 - (-oq).exp())) / oq).powf(1.0 / q)
}

/// A convolution value with its truncation accounting.
#[derive(Debug, Clone, Serialize)]
pub struct Convolution {
    #[serde(serialize_with = "crate::numeric::serialize_cvec")]
    pub value: CVec,
    /// `sup||f||` over the integration window times the kernel tail mass
    /// beyond the truncation; zero for finite integrals.
    pub tail_bound: f64,
    /// Max of `||f||` over the quadrature nodes (the scale in `tail_bound`).
    pub sup_estimate: f64,
}

/// Quadrature for `int_0^T R(u) f(t - u) du`.
///
/// Smooth kernels use composite trapezoid. The fractional kernel's power
/// branch `u <= 1` is handled by product integration: each cell's kernel
/// mass `int_a^b u^{gamma-1} du = (b^gamma - a^gamma)/gamma` is exact and
/// charged to the midpoint value of `f`, which removes the quadrature
/// error the singularity would otherwise dominate.
fn kernel_quadrature<F>(
    kernel: &Kernel,
    truncation: f64,
    step: f64,
    dim: usize,
    f: F,
) -> (CVec, f64)
where
    F: Fn(f64) -> CVec + Sync,
{
    let h = step;
    let m = ((truncation / h).round() as usize).max(2);
    let mut acc: CVec;
    match *kernel {
        Kernel::Fractional { gamma } => {
            // Product-integration cells on the singular branch.
            let j_break = m.min((1.0 / h).floor() as usize).max(1);
            acc = crate::numeric::chunked_sum_cvec(j_break, 1 << 13, dim, |j| {
                let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
                let mass = (b.powf(gamma) - a.powf(gamma)) / gamma;
                f(a + 0.5 * h).iter().map(|z| z * mass).collect()
            });
            // Trapezoid on the smooth remainder [j_break h, T].
            if j_break < m {
                let rest = crate::numeric::chunked_sum_cvec(m + 1 - j_break, 1 << 13, dim, |i| {
                    let j = j_break + i;
                    let u = j as f64 * h;
                    let w = if j == j_break || j == m { 0.5 } else { 1.0 };
                    let scale = w * h * kernel.eval(u);
                    f(u).iter().map(|z| z * scale).collect()
                });
                for (a, z) in acc.iter_mut().zip(rest.iter()) {
                    *a += z;
                }
            }
        }
        _ => {
            acc = crate::numeric::chunked_sum_cvec(m + 1, 1 << 13, dim, |j| {
                let u = j as f64 * h;
                let w = crate::numeric::trapezoid_weight(j, m + 1);
                let scale = w * h * kernel.eval(if j == 0 { f64::MIN_POSITIVE } else { u });
                f(u).iter().map(|z| z * scale).collect()
            });
        }
    }
    let sup = crate::numeric::par_max(m + 1, |j| norm(&f(j as f64 * h)));
    (acc, sup)
}

/// `F(t) = int_{t-T}^{t} R(t-s) f(s) ds` for a full-line signal, with the
/// discarded tail `int_T^inf` bounded by the window sup of `||f||`.
pub fn convolve_line(
    kernel: &Kernel,
    signal: &Signal,
    t: f64,
    truncation: f64,
    step: f64,
) -> Result<Convolution> {
    kernel.validate()?;
    if signal.domain() != Domain::FullLine {
        return Err(Error::SignalMismatch(
            "line convolution needs a full-line signal".into(),
        ));
    }
    if !(truncation > 0.0) || !(step > 0.0) || step >= truncation {
        return Err(Error::InvalidParam(
            "need 0 < step < truncation in a convolution".into(),
        ));
    }
    let (value, sup) = kernel_quadrature(kernel, truncation, step, signal.dim(), |u| {
        signal.eval_unchecked(t - u)
    });
    Ok(Convolution {
        value,
        tail_bound: sup * kernel.tail_mass(truncation),
        sup_estimate: sup,
    })
}

/// `H(t) = int_0^t R(t-s) f(s) ds` for `t > 0`: a finite integral, no tail.
pub fn convolve_halfline(
    kernel: &Kernel,
    signal: &Signal,
    t: f64,
    step: f64,
) -> Result<Convolution> {
    kernel.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("t = {t} must be positive")));
    }
    if !(step > 0.0) || step >= t {
        return Err(Error::InvalidParam("need 0 < step < t".into()));
    }
    signal.eval(0.0)?; // domain must include the lower endpoint
    let (value, sup) = kernel_quadrature(kernel, t, step, signal.dim(), |u| {
        signal.eval_unchecked(t - u)
    });
    Ok(Convolution {
        value,
        tail_bound: 0.0,
        sup_estimate: sup,
    })
}

/// Heat-kernel smoothing
/// `u(x, t0) = (1/(2 sqrt(pi t0))) int e^{-(x-s)^2/(4 t0)} f(s) ds`,
/// truncated to `|x - s| <= window`.
pub fn heat_solution(
    signal: &Signal,
    t0: f64,
    x: f64,
    window: f64,
    step: f64,
) -> Result<Convolution> {
    let kernel = Kernel::GaussianHeat { t0 };
    kernel.validate()?;
    if signal.domain() != Domain::FullLine {
        return Err(Error::SignalMismatch(
            "heat smoothing needs a full-line signal".into(),
        ));
    }
    if !(window > 0.0) || !(step > 0.0) || step >= window {
        return Err(Error::InvalidParam("need 0 < step < window".into()));
    }
    let h = step;
    let m = ((2.0 * window / h).round() as usize).max(2);
    let dim = signal.dim();
    let value = crate::numeric::chunked_sum_cvec(m + 1, 1 << 13, dim, |j| {
        let v = -window + j as f64 * h;
        let w = crate::numeric::trapezoid_weight(j, m + 1);
        let scale = w * h * kernel.eval(v.abs().max(f64::MIN_POSITIVE));
        signal
            .eval_unchecked(x - v)
            .iter()
            .map(|z| z * scale)
            .collect()
    });
    let sup = crate::numeric::par_max(m + 1, |j| {
        norm(&signal.eval_unchecked(x - (-window + j as f64 * h)))
    });
    Ok(Convolution {
        value,
        tail_bound: sup * 2.0 * kernel.tail_mass(window),
        sup_estimate: sup,
    })
}

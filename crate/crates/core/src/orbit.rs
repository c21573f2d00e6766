//! Powers of an irrational rotation on the unit circle: approximate a
//! target `c'` by `c^l`, and expose the root structure of rational-angle
//! multipliers.

use num_complex::Complex64;
use serde::Serialize;

use crate::defaults::ORBIT_L_MAX;
use crate::error::{Error, Result};
use crate::unit_circle::{ArgKind, UnitComplex};

/// Indices `l` with `|c^{l}| - target| < epsilon` for `c = e^{i pi phi}`,
/// listed in increasing order with their worst consecutive gap.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitApproximants {
    pub phi: f64,
    pub target: [f64; 2],
    pub epsilon: f64,
    pub ls: Vec<u64>,
    /// Max of `l_{k+1} - l_k` over the listed indices.
    pub gaps_bound: u64,
}

/// Chord distance between angles (in units of pi): `|e^{i pi a} - e^{i pi b}|`.
#[inline]
fn chord(a_minus_b_in_pi: f64) -> f64 {
    2.0 * (std::f64::consts::PI * a_minus_b_in_pi / 2.0).sin().abs()
}

/// Find the first `k_count` indices `l` (in increasing order) with
/// `|c^l - target| < epsilon`, scanning `l = 1..=l_max`.
///
/// The enumeration is exhaustive, so the returned list is exactly the
/// increasing prefix of the admissible set: a brute-force cross-check
/// over the same range must agree index for index. Continued-fraction
/// near-returns (see [`convergent_denominators`]) bound how long the scan
/// can go between hits and motivate the default budget.
pub fn orbit_approximants(
    phi: f64,
    target: Complex64,
    epsilon: f64,
    k_count: usize,
    l_max: Option<u64>,
) -> Result<OrbitApproximants> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParam("epsilon must be positive".into()));
    }
    if k_count == 0 {
        return Err(Error::InvalidParam("k_count must be at least 1".into()));
    }
    let modulus = target.norm();
    if (modulus - 1.0).abs() > crate::defaults::UNIT_MODULUS_TOL {
        return Err(Error::InvalidMultiplier { modulus });
    }
    let l_max = l_max.unwrap_or(ORBIT_L_MAX);
    let target_angle = target.arg() / std::f64::consts::PI; // units of pi
    let mut ls = Vec::with_capacity(k_count);
    // Track l * phi mod 2 incrementally; the subtraction keeps the value
    // small so precision does not degrade with l.
    let phi_red = phi.rem_euclid(2.0);
    let mut angle = 0.0f64;
    for l in 1..=l_max {
        angle += phi_red;
        if angle >= 2.0 {
            angle -= 2.0;
        }
        let mut delta = angle - target_angle;
        if delta > 1.0 {
            delta -= 2.0;
        } else if delta < -1.0 {
            delta += 2.0;
        }
        if chord(delta) < epsilon {
            ls.push(l);
            if ls.len() == k_count {
                break;
            }
        }
    }
    if ls.len() < k_count {
        return Err(Error::SearchBudget {
            l_max,
            found: ls.len(),
            requested: k_count,
        });
    }
    let gaps_bound = ls.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(ls[0]);
    Ok(OrbitApproximants {
        phi,
        target: [target.re, target.im],
        epsilon,
        ls,
        gaps_bound,
    })
}

/// Continued-fraction expansion of `x`, stopping once denominators exceed
/// `max_den`. Returns convergents `(p_k, q_k)`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut p_prev, mut q_prev) = (1i64, 0u64);
    let (mut p, mut q) = (a as i64, 1u64);
    out.push((p, q));
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let recip = 1.0 / frac;
        a = recip.floor();
        frac = recip - a;
        let p_next = a as i64 * p + p_prev;
        let q_next = (a as u64).saturating_mul(q).saturating_add(q_prev);
        if q_next > max_den {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        out.push((p, q));
    }
    out
}

/// Denominators `q` of the convergents of `phi / 2`: powers `c^q` of
/// `c = e^{i pi phi}` return near 1 (`|c^q - 1| -> 0` along this list).
pub fn convergent_denominators(phi: f64, l_max: u64) -> Vec<u64> {
    convergents(phi / 2.0, l_max)
        .into_iter()
        .map(|(_, q)| q)
        .filter(|&q| q > 0)
        .collect()
}

/// Root structure of a rational-argument multiplier `arg(c) = pi p / q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootStructure {
    /// Smallest `n >= 1` with `c^n = 1`: `q` for even `p`, `2q` for odd `p`.
    pub order: u64,
    /// Sign of `c^q = e^{i pi p}`: `(-1)^p`.
    pub q_power_sign: i8,
}

pub fn root_structure(c: &UnitComplex) -> Result<RootStructure> {
    c.ensure_unit()?;
    match c.arg_kind() {
        ArgKind::Rational { p, q } => {
            let even = p.rem_euclid(2) == 0;
            Ok(RootStructure {
                order: if even { q } else { 2 * q },
                q_power_sign: if even { 1 } else { -1 },
            })
        }
        ArgKind::Irrational { .. } => Err(Error::WrongKind {
            expected: "rational argument",
        }),
    }
}

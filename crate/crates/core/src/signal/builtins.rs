//! Builtin signal constructions.
//!
//! Each builtin is a concrete function with known regularity: the
//! constructor registers a Lipschitz constant and, for truncated series,
//! a tail bound certified on an evaluation horizon.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::defaults::TAIL_HORIZON;
use crate::error::{Error, Result};
use crate::signal::{Domain, Signal, Truncation};
use crate::unit_circle::UnitComplex;

/// Catalog of builtin signals, mirroring the `{name, params}` wire form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case")]
pub enum Builtin {
    /// `t -> e^{i mu t}`.
    Exponential { mu: f64 },
    /// `t -> cos t`.
    Cosine,
    /// `t -> cos(4t)/2 + 2 cos(2t)`: periodic but with no approximate
    /// anti-periods (its defect against `c = -1` never drops below 1).
    KaderG,
    /// `x -> sum_{k=1}^{n} e^{i x / (2kq+1)} / k^2` for odd `p`, `q` with
    /// `q | p - 1`; carries exact `e^{i pi p/q}`-periods (see
    /// [`strina_c_period`]).
    StrinaSeries { p: u64, q: u64, n: u32 },
    /// `t -> sum_{k=1}^{n} sin^2(t / base^k) / k`: unbounded, uniformly
    /// continuous, with recurrence shifts `base^m * pi`.
    HarauxSouplet { base: u32, n: u32 },
    /// Recurrent triangle-wave hierarchy: level `m` places scaled copies of
    /// level `m - 1` at multiples of `tau_m = 2 * sum_{i<m} i tau_i + 1`,
    /// giving `|f_m(x + tau_m) - f_m(x)| <= 1/m`.
    BohrRecurrent { n_max: u32 },
    /// Supremum of triangle waves `|t|/p_i` extended `2 p_i`-periodically.
    /// Explicit `ps` or the default rule `p_i = 2^(i^2)` for `i <= i_max`.
    Devries {
        #[serde(default)]
        ps: Vec<u64>,
        #[serde(default)]
        i_max: Option<u32>,
    },
    /// `t -> sin t * g(t)` with `g` the base-3 series: uniformly
    /// anti-recurrent and Stepanov unbounded.
    DugorocneF { n: u32 },
}

impl Builtin {
    /// Build the signal, certifying tail bounds on the default horizon.
    pub fn build(&self) -> Result<Signal> {
        self.build_with_horizon(TAIL_HORIZON)
    }

    /// Build the signal with tail bounds certified for `|t| <= horizon`.
    pub fn build_with_horizon(&self, horizon: f64) -> Result<Signal> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidParam("horizon must be positive".into()));
        }
        match self {
            Builtin::Exponential { mu } => {
                if !mu.is_finite() {
                    return Err(Error::InvalidBuiltin(
                        "exponential: mu must be finite".into(),
                    ));
                }
                let mu = *mu;
                Ok(
                    Signal::from_scalar_fn(Domain::FullLine, move |t| Complex64::cis(mu * t))
                        .with_lipschitz(mu.abs()),
                )
            }
            Builtin::Cosine => {
                Ok(
                    Signal::from_scalar_fn(Domain::FullLine, |t| Complex64::new(t.cos(), 0.0))
                        .with_lipschitz(1.0),
                )
            }
            Builtin::KaderG => Ok(Signal::from_scalar_fn(Domain::FullLine, |t| {
                Complex64::new(0.5 * (4.0 * t).cos() + 2.0 * (2.0 * t).cos(), 0.0)
            })
            .with_lipschitz(6.0)),
            Builtin::StrinaSeries { p, q, n } => build_strina(*p, *q, *n),
            Builtin::HarauxSouplet { base, n } => build_haraux(*base, *n, horizon),
            Builtin::BohrRecurrent { n_max } => build_bohr_recurrent(*n_max),
            Builtin::Devries { ps, i_max } => build_devries(ps, *i_max, horizon),
            Builtin::DugorocneF { n } => build_dugorocne(*n, horizon),
        }
    }

    /// One-line descriptions for the CLI catalog.
    pub fn catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            ("exponential", "e^{i mu t}; params: {mu}"),
            ("cosine", "cos t"),
            ("kader-g", "cos(4t)/2 + 2 cos(2t)"),
            (
                "strina-series",
                "sum e^{ix/(2kq+1)}/k^2, k<=n; params: {p, q, n} with p,q odd, q | p-1",
            ),
            (
                "haraux-souplet",
                "sum sin^2(t/base^k)/k, k<=n; params: {base in {2,3}, n}",
            ),
            (
                "bohr-recurrent",
                "recurrent triangle hierarchy; params: {n_max <= 8}",
            ),
            (
                "devries",
                "sup of triangle waves |t|/p_i; params: {ps} or {i_max} (p_i = 2^(i^2))",
            ),
            ("dugorocne-f", "sin t * base-3 series; params: {n}"),
        ]
    }
}

fn build_strina(p: u64, q: u64, n: u32) -> Result<Signal> {
    if p.is_multiple_of(2) || q.is_multiple_of(2) || p == 0 || q == 0 {
        return Err(Error::InvalidBuiltin(
            "strina-series: p and q must be odd naturals".into(),
        ));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(Error::InvalidBuiltin(
            "strina-series: q must divide p - 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidBuiltin(
            "strina-series: n >= 1 required".into(),
        ));
    }
    let freqs: Vec<f64> = (1..=n as u64)
        .map(|k| 1.0 / (2 * k * q + 1) as f64)
        .collect();
    let weights: Vec<f64> = (1..=n as u64).map(|k| 1.0 / (k * k) as f64).collect();
    let lipschitz: f64 = freqs.iter().zip(&weights).map(|(f, w)| f * w).sum();
    // sum_{k > n} 1/k^2 < 1/n.
    let tail = 1.0 / n as f64;
    Ok(Signal::from_scalar_fn(Domain::FullLine, move |t| {
        freqs
            .iter()
            .zip(&weights)
            .map(|(&f, &w)| Complex64::cis(t * f) * w)
            .sum()
    })
    .with_lipschitz(lipschitz)
    .with_truncation(Truncation {
        n,
        tail_bound: tail,
        horizon: f64::INFINITY,
    }))
}

/// The multiplier `c = e^{i pi p / q}` attached to the strina construction.
pub fn strina_multiplier(p: u64, q: u64) -> Result<UnitComplex> {
    UnitComplex::from_rational(p as i64, q)
}

/// Shift `P_k = (pi r / q) * prod_{j<=k} (2jq + 1)` with `r = p mod 2q`
/// (the angle class of `c`): the `k`-term truncation satisfies
/// `f(x + P_k) = c f(x)` exactly, and deeper truncations satisfy it within
/// `2 sum_{j>k} 1/j^2`.
pub fn strina_c_period(p: u64, q: u64, k: u32) -> f64 {
    let mut prod = 1.0;
    for j in 1..=k as u64 {
        prod *= (2 * j * q + 1) as f64;
    }
    let mut r = p % (2 * q);
    if r == 0 {
        r = 2 * q;
    }
    std::f64::consts::PI * (r as f64 / q as f64) * prod
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn haraux_lipschitz(base: u32, n: u32) -> f64 {
    // |d/dt sin^2(t/b^k)/k| = |sin(2t/b^k)| / (k b^k) <= 1/(k b^k).
    (1..=n)
        .map(|k| 1.0 / (k as f64 * (base as f64).powi(k as i32)))
        .sum()
}

fn haraux_tail_bound(base: u32, n: u32, horizon: f64) -> f64 {
    // |sin^2(t/b^k)| <= (t/b^k)^2, so the tail beyond n is at most
    // horizon^2 * sum_{k>n} b^{-2k}/k <= horizon^2 b^{-2(n+1)} / ((n+1)(1 - b^{-2})).
    let b2 = (base as f64).powi(-2);
    horizon * horizon * b2.powi(n as i32 + 1) / ((n as f64 + 1.0) * (1.0 - b2))
}

fn build_haraux(base: u32, n: u32, horizon: f64) -> Result<Signal> {
    if base != 2 && base != 3 {
        return Err(Error::InvalidBuiltin(
            "haraux-souplet: base must be 2 or 3".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidBuiltin(
            "haraux-souplet: n >= 1 required".into(),
        ));
    }
    let scales: Vec<f64> = (1..=n).map(|k| (base as f64).powi(-(k as i32))).collect();
    let weights: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    Ok(Signal::from_scalar_fn(Domain::FullLine, move |t| {
        let mut acc = 0.0;
        for (&s, &w) in scales.iter().zip(&weights) {
            let x = (t * s).sin();
            acc += w * x * x;
        }
        Complex64::new(acc, 0.0)
    })
    .with_lipschitz(haraux_lipschitz(base, n))
    .with_truncation(Truncation {
        n,
        tail_bound: haraux_tail_bound(base, n, horizon),
        horizon,
    }))
}

fn build_bohr_recurrent(n_max: u32) -> Result<Signal> {
    if n_max == 0 || n_max > 8 {
        return Err(Error::InvalidBuiltin(
            "bohr-recurrent: n_max must be in 1..=8".into(),
        ));
    }
    let (taus, radii) = bohr_taus_and_radii(n_max);
    let top = n_max as usize;
    Ok(Signal::from_scalar_fn(Domain::FullLine, move |t| {
        let mut x = t;
        let mut coeff = 1.0;
        for level in (2..=top).rev() {
            let tau = taus[level - 1];
            let m = (x / tau).round();
            let m = m.clamp(-(level as f64 - 1.0), level as f64 - 1.0);
            let y = x - m * tau;
            if y.abs() > radii[level - 2] {
                return Complex64::new(0.0, 0.0);
            }
            if m != 0.0 {
                coeff *= (level as f64 - m.abs()) / level as f64;
            }
            x = y;
        }
        Complex64::new(coeff * (1.0 - x.abs()).max(0.0), 0.0)
    })
    .with_lipschitz(1.0))
}

/// `tau_1 = 1`, `tau_m = 2 sum_{i<m} i tau_i + 1`, and the support radii
/// `r_1 = 1`, `r_m = r_{m-1} + (m-1) tau_m`. The `+1` keeps the strict
/// inequality `tau_m > 2 sum_{i<m} i tau_i`, so translated copies stay
/// disjoint and at most one branch of the recursion is live at any `x`.
pub fn bohr_taus_and_radii(n_max: u32) -> (Vec<f64>, Vec<f64>) {
    let n = n_max as usize;
    let mut taus = vec![0.0; n];
    let mut radii = vec![0.0; n];
    let mut weighted_sum = 0.0;
    for m in 1..=n {
        taus[m - 1] = if m == 1 {
            1.0
        } else {
            2.0 * weighted_sum + 1.0
        };
        weighted_sum += m as f64 * taus[m - 1];
        radii[m - 1] = if m == 1 {
            1.0
        } else {
            radii[m - 2] + (m as f64 - 1.0) * taus[m - 1]
        };
    }
    (taus, radii)
}

fn build_devries(ps: &[u64], i_max: Option<u32>, horizon: f64) -> Result<Signal> {
    let (ps, next_p): (Vec<u64>, Option<u64>) = if ps.is_empty() {
        let i_max = i_max.unwrap_or(4);
        if i_max == 0 || i_max > 7 {
            return Err(Error::InvalidBuiltin(
                "devries: i_max must be in 1..=7".into(),
            ));
        }
        (
            (1..=i_max).map(|i| 1u64 << (i * i)).collect(),
            Some(1u64 << ((i_max + 1) * (i_max + 1)).min(63)),
        )
    } else {
        (ps.to_vec(), None)
    };
    for w in ps.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(Error::InvalidBuiltin(
                "devries: ps must be strictly increasing with p_i | p_{i+1}".into(),
            ));
        }
    }
    if ps[0] == 0 {
        return Err(Error::InvalidBuiltin(
            "devries: p_i must be positive".into(),
        ));
    }
    let lipschitz = 1.0 / ps[0] as f64;
    let truncation = next_p.map(|np| Truncation {
        n: ps.len() as u32,
        // Terms beyond i_max contribute at most |t|/p_{i_max+1}.
        tail_bound: horizon / np as f64,
        horizon,
    });
    let ps_f: Vec<f64> = ps.iter().map(|&p| p as f64).collect();
    let mut signal = Signal::from_scalar_fn(Domain::FullLine, move |t| {
        let v = ps_f
            .iter()
            .map(|&p| {
                let u = t - 2.0 * p * (t / (2.0 * p)).round();
                u.abs() / p
            })
            .fold(0.0, f64::max);
        Complex64::new(v, 0.0)
    })
    .with_lipschitz(lipschitz);
    if let Some(tr) = truncation {
        signal = signal.with_truncation(tr);
    }
    Ok(signal)
}

fn build_dugorocne(n: u32, horizon: f64) -> Result<Signal> {
    if n == 0 {
        return Err(Error::InvalidBuiltin("dugorocne-f: n >= 1 required".into()));
    }
    let scales: Vec<f64> = (1..=n).map(|k| 3.0f64.powi(-(k as i32))).collect();
    let weights: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    // |f'| <= |g| + |g'| <= H_n + L_g since sin^2 <= 1 termwise.
    let lipschitz = harmonic(n) + haraux_lipschitz(3, n);
    Ok(Signal::from_scalar_fn(Domain::FullLine, move |t| {
        let mut g = 0.0;
        for (&s, &w) in scales.iter().zip(&weights) {
            let x = (t * s).sin();
            g += w * x * x;
        }
        Complex64::new(t.sin() * g, 0.0)
    })
    .with_lipschitz(lipschitz)
    .with_truncation(Truncation {
        n,
        tail_bound: haraux_tail_bound(3, n, horizon),
        horizon,
    }))
}

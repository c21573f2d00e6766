//! Signals as pure evaluation maps `t -> C^d`, with the pointwise
//! transforms the theory is closed under.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numeric::{norm, CVec};

pub mod builtins;

pub use builtins::Builtin;

/// Interval the signal is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    FullLine,
    HalfLine,
}

impl Domain {
    pub fn contains(&self, t: f64) -> bool {
        match self {
            Domain::FullLine => t.is_finite(),
            Domain::HalfLine => t.is_finite() && t >= 0.0,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Domain::FullLine => "full-line",
            Domain::HalfLine => "half-line",
        }
    }
}

/// Series-truncation metadata: the signal is an `n`-term truncation whose
/// sup-distance to the formal limit is at most `tail_bound` for
/// `|t| <= horizon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub n: u32,
    pub tail_bound: f64,
    pub horizon: f64,
}

type EvalFn = dyn Fn(f64) -> CVec + Send + Sync;

/// A pure evaluation map `t -> C^d` with optional regularity metadata.
///
/// Signals are immutable and cheap to clone (the evaluation closure is
/// shared). Evaluation is deterministic and reentrant: the same `t` always
/// returns bit-identical values.
#[derive(Clone)]
pub struct Signal {
    domain: Domain,
    dim: usize,
    lipschitz: Option<f64>,
    truncation: Option<Truncation>,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signal")
            .field("domain", &self.domain)
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .field("truncation", &self.truncation)
            .finish_non_exhaustive()
    }
}

impl Signal {
    /// Wrap an arbitrary evaluation closure.
    pub fn from_fn<F>(domain: Domain, dim: usize, eval: F) -> Self
    where
        F: Fn(f64) -> CVec + Send + Sync + 'static,
    {
        Signal {
            domain,
            dim,
            lipschitz: None,
            truncation: None,
            eval: Arc::new(eval),
        }
    }

    /// Wrap a scalar evaluation closure (`dim = 1`).
    pub fn from_scalar_fn<F>(domain: Domain, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Signal::from_fn(domain, 1, move |t| {
            let mut v = CVec::new();
            v.push(eval(t));
            v
        })
    }

    /// The constant signal `t -> kappa`.
    pub fn constant(domain: Domain, kappa: Complex64) -> Self {
        Signal::from_scalar_fn(domain, move |_| kappa)
    }

    /// Register a Lipschitz constant (not verified here; property tests
    /// sample-check registered constants).
    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = Some(truncation);
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// Evaluate at `t`, rejecting points outside the domain.
    pub fn eval(&self, t: f64) -> Result<CVec> {
        if !self.domain.contains(t) {
            return Err(Error::Domain {
                t,
                domain: self.domain.name(),
            });
        }
        Ok((self.eval)(t))
    }

    /// Evaluate without the domain check. Hot paths validate their grid
    /// once with [`Signal::check_grid`] and then use this per node.
    pub fn eval_unchecked(&self, t: f64) -> CVec {
        (self.eval)(t)
    }

    /// Check that every node of `grid` (optionally shifted) lies in the domain.
    pub fn check_grid(&self, grid: &Grid, shift: f64) -> Result<()> {
        let lo = grid.start() + shift.min(0.0);
        if !self.domain.contains(lo) {
            return Err(Error::Domain {
                t: lo,
                domain: self.domain.name(),
            });
        }
        Ok(())
    }

    /// `alpha * f`.
    pub fn scale(&self, alpha: Complex64) -> Signal {
        let inner = Arc::clone(&self.eval);
        Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: self.lipschitz.map(|l| l * alpha.norm()),
            truncation: self.truncation.map(|tr| Truncation {
                tail_bound: tr.tail_bound * alpha.norm(),
                ..tr
            }),
            eval: Arc::new(move |t| inner(t).iter().map(|z| alpha * z).collect()),
        }
    }

    /// `f(. + a)`. On the half-line the shift must be nonnegative so the
    /// domain is preserved.
    pub fn shift(&self, a: f64) -> Result<Signal> {
        if self.domain == Domain::HalfLine && a < 0.0 {
            return Err(Error::SignalMismatch(
                "negative shift leaves the half-line domain".into(),
            ));
        }
        let inner = Arc::clone(&self.eval);
        Ok(Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: self.lipschitz,
            truncation: self.truncation.map(|tr| Truncation {
                horizon: tr.horizon - a.abs(),
                ..tr
            }),
            eval: Arc::new(move |t| inner(t + a)),
        })
    }

    /// `f(b .)` for `b != 0`. Negative `b` requires the full line.
    pub fn dilate(&self, b: f64) -> Result<Signal> {
        if b == 0.0 {
            return Err(Error::InvalidParam(
                "dilation factor must be nonzero".into(),
            ));
        }
        if self.domain == Domain::HalfLine && b < 0.0 {
            return Err(Error::SignalMismatch(
                "negative dilation leaves the half-line domain".into(),
            ));
        }
        let inner = Arc::clone(&self.eval);
        Ok(Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: self.lipschitz.map(|l| l * b.abs()),
            truncation: self.truncation.map(|tr| Truncation {
                horizon: tr.horizon / b.abs(),
                ..tr
            }),
            eval: Arc::new(move |t| inner(b * t)),
        })
    }

    /// `f(-x)`; full-line signals only.
    pub fn reflect(&self) -> Result<Signal> {
        if self.domain != Domain::FullLine {
            return Err(Error::SignalMismatch(
                "reflection requires a full-line signal".into(),
            ));
        }
        let inner = Arc::clone(&self.eval);
        Ok(Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: self.lipschitz,
            truncation: self.truncation,
            eval: Arc::new(move |t| inner(-t)),
        })
    }

    fn check_binary(&self, other: &Signal) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::SignalMismatch(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        if self.domain != other.domain {
            return Err(Error::SignalMismatch(format!(
                "domain mismatch: {} vs {}",
                self.domain.name(),
                other.domain.name()
            )));
        }
        Ok(())
    }

    /// Pointwise sum; requires equal dimensions and domains.
    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.check_binary(other)?;
        let a = Arc::clone(&self.eval);
        let b = Arc::clone(&other.eval);
        Ok(Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: match (self.lipschitz, other.lipschitz) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            truncation: match (self.truncation, other.truncation) {
                (Some(x), Some(y)) => Some(Truncation {
                    n: x.n.min(y.n),
                    tail_bound: x.tail_bound + y.tail_bound,
                    horizon: x.horizon.min(y.horizon),
                }),
                _ => None,
            },
            eval: Arc::new(move |t| a(t).iter().zip(b(t).iter()).map(|(x, y)| x + y).collect()),
        })
    }

    /// Pointwise (Hadamard) product; requires equal dimensions and domains.
    /// No Lipschitz constant is propagated: it would need sup bounds the
    /// metadata does not carry.
    pub fn multiply(&self, other: &Signal) -> Result<Signal> {
        self.check_binary(other)?;
        let a = Arc::clone(&self.eval);
        let b = Arc::clone(&other.eval);
        Ok(Signal {
            domain: self.domain,
            dim: self.dim,
            lipschitz: None,
            truncation: None,
            eval: Arc::new(move |t| a(t).iter().zip(b(t).iter()).map(|(x, y)| x * y).collect()),
        })
    }

    /// View a full-line signal as a half-line one (same values on `t >= 0`).
    pub fn restrict_half_line(&self) -> Signal {
        Signal {
            domain: Domain::HalfLine,
            ..self.clone()
        }
    }

    /// `t -> ||f(t)||` as a real-valued scalar signal.
    pub fn modulus(&self) -> Signal {
        let inner = Arc::clone(&self.eval);
        Signal {
            domain: self.domain,
            dim: 1,
            lipschitz: self.lipschitz,
            truncation: self.truncation,
            eval: Arc::new(move |t| {
                let mut v = CVec::new();
                v.push(Complex64::new(norm(&inner(t)), 0.0));
                v
            }),
        }
    }
}

/// Grid maximum of `||f||` with an optional Lipschitz-certified bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNorm {
    /// Max of `||f(t)||` over grid nodes.
    pub grid_max: f64,
    /// `grid_max + L * step / 2` when a Lipschitz constant is registered:
    /// an upper bound for the sup over the continuous interval.
    pub certified: Option<f64>,
}

/// Approximate `sup_t ||f(t)||` over the grid.
pub fn sup_norm(signal: &Signal, grid: &Grid) -> Result<SupNorm> {
    signal.check_grid(grid, 0.0)?;
    let grid_max =
        crate::numeric::par_max(grid.len(), |j| norm(&signal.eval_unchecked(grid.node(j))));
    Ok(SupNorm {
        grid_max,
        certified: signal.lipschitz.map(|l| grid_max + l * grid.step() / 2.0),
    })
}

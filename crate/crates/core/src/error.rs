use thiserror::Error;

/// Errors shared across the crate.
///
/// Variants split into two families: *validation* errors (bad inputs,
/// violated preconditions, detectable before any numerics run) and
/// *numerical* errors (an iteration or search that started and could not
/// finish). The CLI maps the families to distinct exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Evaluation point outside the signal's domain.
    #[error("domain violation: t = {t} lies outside the {domain} domain")]
    Domain { t: f64, domain: &'static str },

    /// Mismatched dimensions or domains in a binary signal operation.
    #[error("signal mismatch: {0}")]
    SignalMismatch(String),

    /// Unknown builtin name or invalid builtin parameters.
    #[error("invalid builtin: {0}")]
    InvalidBuiltin(String),

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Multiplier failed the unit-modulus check `||c| - 1| <= 1e-12`.
    /// Off-circle multipliers admit no nonzero recurrent signals, so every
    /// operation rejects them up front.
    #[error("multiplier off the unit circle: |c| = {modulus}")]
    InvalidMultiplier { modulus: f64 },

    /// `UnitComplex` value disagrees with its declared argument kind.
    #[error("multiplier value disagrees with declared argument: |c - e^(i pi phi)| = {deviation}")]
    ArgMismatch { deviation: f64 },

    /// Operation requires a rational-argument multiplier (or vice versa).
    #[error("wrong multiplier kind: expected {expected}")]
    WrongKind { expected: &'static str },

    /// Period-transfer precondition failed; names the violated inequality.
    #[error("transfer precondition failed: {0}")]
    Transfer(String),

    /// Masked defect requested but no grid node survives the mask.
    #[error("empty mask: no grid node satisfies |t| >= {m} and |t + tau| >= {m}")]
    EmptyMask { m: f64 },

    /// Half-line extension impossible: no accepted period reaches the point.
    #[error("extension failed: no accepted period tau >= {needed} with defect <= {epsilon}")]
    Extension { needed: f64, epsilon: f64 },

    /// Orbit search exhausted its budget; carries the best partial result.
    #[error("search budget exhausted at l_max = {l_max}: found {found} of {requested} indices")]
    SearchBudget {
        l_max: u64,
        found: usize,
        requested: usize,
    },

    /// Window integral diverges at the kernel singularity.
    #[error("singular window: exponent {exponent} makes the k = 0 window integral diverge")]
    SingularWindow { exponent: f64 },

    /// Fixed-point map is not a contraction and the caller did not override.
    #[error("not a contraction: M1 = {m1} >= 1 (pass an override to iterate anyway)")]
    NotContractive { m1: f64 },

    /// Fixed-point iteration residual grew over several consecutive steps.
    #[error("divergence: residual grew for {streak} consecutive iterations (last = {residual})")]
    Divergence { streak: usize, residual: f64 },

    /// Operation requires a nonempty scan report.
    #[error("empty scan: {0}")]
    EmptyScan(String),
}

impl Error {
    /// True for errors that indicate a failed computation rather than a
    /// rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SearchBudget { .. }
                | Error::Divergence { .. }
                | Error::NotContractive { .. }
                | Error::Extension { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

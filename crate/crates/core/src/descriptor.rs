//! Reproducible signal descriptors: `{name, params, transforms[]}`.
//!
//! A descriptor pins down exactly how a signal was constructed, so a run
//! recorded in a config file rebuilds the same evaluation map.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::signal::{Builtin, Signal};

/// One transform step applied to the signal built so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformStep {
    Scale { re: f64, im: f64 },
    Shift { a: f64 },
    Dilate { b: f64 },
    Reflect,
    Modulus,
    Add(Box<SignalDescriptor>),
    Multiply(Box<SignalDescriptor>),
}

/// A builtin plus a pipeline of transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalDescriptor {
    #[serde(flatten)]
    pub builtin: Builtin,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<TransformStep>,
}

impl SignalDescriptor {
    pub fn new(builtin: Builtin) -> Self {
        SignalDescriptor {
            builtin,
            transforms: Vec::new(),
        }
    }

    /// Build the signal with tail bounds certified for `|t| <= horizon`.
    pub fn build_with_horizon(&self, horizon: f64) -> Result<Signal> {
        let mut signal = self.builtin.build_with_horizon(horizon)?;
        for step in &self.transforms {
            signal = match step {
                TransformStep::Scale { re, im } => signal.scale(Complex64::new(*re, *im)),
                TransformStep::Shift { a } => signal.shift(*a)?,
                TransformStep::Dilate { b } => signal.dilate(*b)?,
                TransformStep::Reflect => signal.reflect()?,
                TransformStep::Modulus => signal.modulus(),
                TransformStep::Add(other) => signal.add(&other.build_with_horizon(horizon)?)?,
                TransformStep::Multiply(other) => {
                    signal.multiply(&other.build_with_horizon(horizon)?)?
                }
            };
        }
        Ok(signal)
    }

    pub fn build(&self) -> Result<Signal> {
        self.build_with_horizon(crate::defaults::TAIL_HORIZON)
    }
}

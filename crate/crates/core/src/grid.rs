use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite sampling of a `t`-interval, used to approximate suprema and
/// integrals. Nodes are `start + j * step` for `j = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    start: f64,
    end: f64,
    step: f64,
}

impl Grid {
    /// Requires `start < end`, `step > 0`, and at least two nodes.
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParam("grid bounds must be finite".into()));
        }
        if start >= end {
            return Err(Error::InvalidParam(format!(
                "grid start {start} must be below end {end}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "grid step {step} must be positive"
            )));
        }
        let grid = Grid { start, end, step };
        if grid.len() < 2 {
            return Err(Error::InvalidParam(format!(
                "grid [{start}, {end}] with step {step} has fewer than two nodes"
            )));
        }
        Ok(grid)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of nodes: `floor((end - start) / step) + 1`.
    pub fn len(&self) -> usize {
        ((self.end - self.start) / self.step).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees >= 2 nodes
    }

    /// The `j`-th node.
    pub fn node(&self, j: usize) -> f64 {
        self.start + j as f64 * self.step
    }

    /// Iterator over all nodes in increasing order.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.node(j))
    }

    /// Grid with the same step covering `[start, end + extension]`.
    pub fn extended(&self, extension: f64) -> Result<Self> {
        Grid::new(self.start, self.end + extension.max(0.0), self.step)
    }

    /// Grid shifted by `offset` (same node count and step).
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Grid::new(self.start + offset, self.end + offset, self.step)
    }
}

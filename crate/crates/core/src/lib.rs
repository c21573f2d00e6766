//! Numerical laboratory for `c`-almost-periodic signals.
//!
//! Everything here revolves around one measurement: given a signal
//! `f : I -> C^d`, a shift `tau > 0` and a unit-modulus multiplier `c`,
//! how large is `sup_t || f(t + tau) - c f(t) ||`? Shifts for which that
//! defect stays below `epsilon` are `(epsilon, c)`-periods, and their
//! density (or absence) classifies the signal: `c`-almost periodic,
//! `c`-uniformly recurrent, semi-`c`-periodic, or none of these.
//!
//! The crate provides
//!
//! * [`signal`]: builtin signal constructions (trigonometric polynomials,
//!   lacunary `sin^2` series, recurrent triangle-wave hierarchies) and
//!   pointwise transforms, all as immutable evaluation maps;
//! * [`period`]: defect measurement, `(epsilon, c)`-period scans,
//!   relative-density witnesses, semi-period checks, and half-line
//!   extension;
//! * [`orbit`]: approximation of unit-circle targets by powers `c^l`
//!   of an irrational rotation, plus the root structure of rational-angle
//!   multipliers;
//! * [`stepanov`]: sliding-window `L^p` norms and window-metric period
//!   scans;
//! * [`spectrum`]: long-run means, Bohr–Fourier coefficients, spectrum
//!   estimation, and the vanishing-mean test;
//! * [`convolution`]: kernel families (exponential, weakly singular
//!   fractional, Gaussian) with summability checks and convolution
//!   products;
//! * [`solver`]: the contraction fixed-point iteration for the mild
//!   solution `u(t) = ∫_{-inf}^t R(t-s) F(s, u(s)) ds` with recurrence
//!   diagnostics of the solution.
//!
//! All suprema are grid maxima: results are certified *on the grid*, with
//! optional Lipschitz slack turning them into interval bounds. Nothing in
//! this crate proves almost periodicity of an arbitrary signal; it
//! measures the finite evidence.

// Validation uses `!(x > 0.0)` so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
pub mod descriptor;
pub mod error;
pub mod grid;
pub mod orbit;
pub mod period;
pub mod signal;
pub mod solver;
pub mod spectrum;
pub mod stepanov;
pub mod unit_circle;

pub(crate) mod numeric;

pub use error::{Error, Result};
pub use grid::Grid;
pub use numeric::CVec;
pub use signal::{Builtin, Domain, Signal, Truncation};
pub use unit_circle::{ArgKind, UnitComplex};

/// Defaults shared by the library and the command-line front end.
pub mod defaults {
    use std::f64::consts::PI;

    /// Full-line grid used when a caller does not supply one: `[-200*pi, 200*pi]`.
    pub const FULL_LINE_START: f64 = -200.0 * PI;
    pub const FULL_LINE_END: f64 = 200.0 * PI;
    /// Half-line grid used when a caller does not supply one: `[0, 400*pi]`.
    pub const HALF_LINE_END: f64 = 400.0 * PI;
    /// Grid step for the default grids.
    pub const GRID_STEP: f64 = 0.005;
    /// Horizon on which builtin truncation tail bounds are certified.
    pub const TAIL_HORIZON: f64 = 1.0e4;
    /// Quadrature nodes per unit window in Stepanov norms.
    pub const NODES_PER_WINDOW: usize = 64;
    /// Quadrature step for long-run mean integrals.
    pub const MEAN_STEP: f64 = 0.01;
    /// Exhaustive-search budget for orbit approximants.
    pub const ORBIT_L_MAX: u64 = 10_000_000;
    /// Unit-modulus tolerance: multipliers must satisfy `||c| - 1| <= this`.
    pub const UNIT_MODULUS_TOL: f64 = 1.0e-12;
    /// Relative kernel tail target used to pick convolution truncations.
    pub const KERNEL_TAIL_TOL: f64 = 1.0e-8;

    use crate::grid::Grid;

    /// The default full-line grid.
    pub fn full_line_grid() -> Grid {
        Grid::new(FULL_LINE_START, FULL_LINE_END, GRID_STEP).expect("default grid is valid")
    }

    /// The default half-line grid.
    pub fn half_line_grid() -> Grid {
        Grid::new(0.0, HALF_LINE_END, GRID_STEP).expect("default grid is valid")
    }
}

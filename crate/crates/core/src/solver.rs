//! Contraction fixed point for the mild-solution map
//! `(Y u)(t) = int_{-inf}^{t} R(t - s) F(s, u(s)) ds`
//! on a fixed grid, with recurrence diagnostics of the solved trajectory.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::Kernel;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numeric::{diff_norm, CVec};
use crate::period::RecurrenceReport;
use crate::unit_circle::UnitComplex;

type ForcingFn = dyn Fn(f64, &[Complex64]) -> CVec + Send + Sync;

/// Nonlinearity `F(t, u)` with a declared Lipschitz constant in `u`.
#[derive(Clone)]
pub struct Forcing {
    eval: Arc<ForcingFn>,
    lipschitz: f64,
    description: String,
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forcing")
            .field("lipschitz", &self.lipschitz)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl Forcing {
    pub fn new<F>(lipschitz: f64, description: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(f64, &[Complex64]) -> CVec + Send + Sync + 'static,
    {
        if !(lipschitz > 0.0) {
            return Err(Error::InvalidParam(
                "Lipschitz constant must be positive".into(),
            ));
        }
        Ok(Forcing {
            eval: Arc::new(eval),
            lipschitz,
            description: description.into(),
        })
    }

    /// Scalar convenience constructor.
    pub fn scalar<F>(lipschitz: f64, description: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(f64, Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Forcing::new(lipschitz, description, move |t, u| {
            let mut v = CVec::new();
            v.push(eval(t, u[0]));
            v
        })
    }

    pub fn eval(&self, t: f64, u: &[Complex64]) -> CVec {
        (self.eval)(t, u)
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Sampled Lipschitz check: `||F(t,x) - F(t,y)|| <= L ||x-y|| + 1e-9`
    /// on deterministic pseudo-random probes of the given dimension.
    pub fn verify_lipschitz(&self, dim: usize, probes: usize) -> Result<()> {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            // xorshift64*: deterministic probes, no external RNG.
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545f4914f6cdd1d) >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..probes {
            let t = 200.0 * (next() - 0.5);
            let x: CVec = (0..dim)
                .map(|_| Complex64::new(4.0 * (next() - 0.5), 4.0 * (next() - 0.5)))
                .collect();
            let y: CVec = (0..dim)
                .map(|_| Complex64::new(4.0 * (next() - 0.5), 4.0 * (next() - 0.5)))
                .collect();
            let fx = self.eval(t, &x);
            let fy = self.eval(t, &y);
            if diff_norm(&fx, &fy) > self.lipschitz * diff_norm(&x, &y) + 1e-9 {
                return Err(Error::InvalidParam(format!(
                    "forcing '{}' violates its declared Lipschitz constant {} at t = {t}",
                    self.description, self.lipschitz
                )));
            }
        }
        Ok(())
    }
}

/// Sampled approximate solution on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub grid: Grid,
    pub dim: usize,
    #[serde(skip)]
    pub values: Vec<CVec>,
    pub iterations: u32,
    /// Sup change of the last iteration over the interior nodes.
    pub residual: f64,
    pub converged: bool,
    /// Leading nodes whose truncation window exits the grid; they reuse the
    /// earliest value and are excluded from residuals and defects.
    pub flagged: usize,
}

impl Trajectory {
    pub fn zero(grid: Grid, dim: usize) -> Self {
        let v: CVec = std::iter::repeat_n(Complex64::new(0.0, 0.0), dim).collect();
        Trajectory {
            grid,
            dim,
            values: vec![v; grid.len()],
            iterations: 0,
            residual: f64::INFINITY,
            converged: false,
            flagged: 0,
        }
    }

    /// Sample an initial trajectory from a function of `t`.
    pub fn from_fn<F>(grid: Grid, dim: usize, f: F) -> Self
    where
        F: Fn(f64) -> CVec,
    {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Trajectory {
            grid,
            dim,
            values,
            iterations: 0,
            residual: f64::INFINITY,
            converged: false,
            flagged: 0,
        }
    }

    /// Indices unaffected by the grid-start boundary.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.flagged..self.values.len()
    }

    /// Sup distance to another trajectory over the common interior.
    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        let lo = self.flagged.max(other.flagged);
        (lo..self.values.len().min(other.values.len()))
            .map(|i| diff_norm(&self.values[i], &other.values[i]))
            .fold(0.0, f64::max)
    }
}

/// Quadrature weights for `int_0^{m h} R(u) g(t - u) du` against samples of
/// `g` at offsets `j h`. Trapezoid for smooth kernels. The fractional
/// kernel's power branch `u <= 1` uses product integration: each cell's
/// exact mass `(b^gamma - a^gamma)/gamma` is split between the two
/// adjacent samples, so the kernel singularity contributes no quadrature
/// error beyond the samples' own linear interpolation.
fn kernel_weights(kernel: &Kernel, h: f64, m: usize) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    match *kernel {
        Kernel::Fractional { gamma } => {
            let j_break = m.min((1.0 / h).floor() as usize).max(1);
            for j in 0..j_break {
                let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
                let mass = (b.powf(gamma) - a.powf(gamma)) / gamma;
                w[j] += 0.5 * mass;
                w[j + 1] += 0.5 * mass;
            }
            if j_break < m {
                w[j_break] += 0.5 * h * kernel.eval(j_break as f64 * h);
                for (j, slot) in w.iter_mut().enumerate().take(m).skip(j_break + 1) {
                    *slot += h * kernel.eval(j as f64 * h);
                }
                w[m] += 0.5 * h * kernel.eval(m as f64 * h);
            }
        }
        _ => {
            for (j, slot) in w.iter_mut().enumerate() {
                let tw = crate::numeric::trapezoid_weight(j, m + 1);
                let u = if j == 0 {
                    f64::MIN_POSITIVE
                } else {
                    j as f64 * h
                };
                *slot = tw * h * kernel.eval(u);
            }
        }
    }
    w
}

/// One application of the mild-solution map on the trajectory's grid.
///
/// Nodes whose window `[t - truncation, t]` leaves the grid reuse the first
/// grid value for the missing history and come back flagged.
pub fn upsilon_apply(
    forcing: &Forcing,
    kernel: &Kernel,
    u: &Trajectory,
    truncation: f64,
) -> Result<Trajectory> {
    kernel.validate()?;
    if !(truncation > 0.0) {
        return Err(Error::InvalidParam("truncation must be positive".into()));
    }
    let h = u.grid.step();
    let m = ((truncation / h).round() as usize).max(2);
    let weights = kernel_weights(kernel, h, m);
    let n = u.grid.len();
    let forced: Vec<CVec> = (0..n)
        .into_par_iter()
        .map(|i| forcing.eval(u.grid.node(i), &u.values[i]))
        .collect();
    let dim = u.dim;
    let values: Vec<CVec> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc: CVec = std::iter::repeat_n(Complex64::new(0.0, 0.0), dim).collect();
            for (j, &w) in weights.iter().enumerate() {
                let src = i.saturating_sub(j);
                for (a, z) in acc.iter_mut().zip(forced[src].iter()) {
                    *a += w * z;
                }
            }
            acc
        })
        .collect();
    Ok(Trajectory {
        grid: u.grid,
        dim,
        values,
        iterations: u.iterations,
        residual: u.residual,
        converged: false,
        flagged: m.min(n),
    })
}

/// `(L * int_0^inf R)^n`: with a constant Lipschitz bound the nested
/// integrals in the n-fold composition factor exactly.
pub fn contraction_estimate(lipschitz: f64, kernel: &Kernel, n: u32) -> Result<f64> {
    kernel.validate()?;
    if n == 0 {
        return Err(Error::InvalidParam("n must be at least 1".into()));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidParam(
            "Lipschitz constant must be positive".into(),
        ));
    }
    Ok((lipschitz * kernel.mass()).powi(n as i32))
}

/// Fixed-point report: the trajectory plus convergence bookkeeping.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub trajectory: Trajectory,
    /// First contraction constant `L * mass`.
    pub m1: f64,
    /// Residual after each iteration.
    pub residuals: Vec<f64>,
}

/// Iterate `u <- Y u` until the sup change over interior nodes drops to
/// `tol` or `max_iter` is reached.
///
/// Refuses non-contractions (`M_1 >= 1`) unless `allow_non_contraction`;
/// residual growth over five consecutive iterations aborts with a
/// divergence error either way.
#[allow(clippy::too_many_arguments)]
pub fn fixed_point_solve(
    forcing: &Forcing,
    kernel: &Kernel,
    u0: Trajectory,
    truncation: f64,
    tol: f64,
    max_iter: u32,
    allow_non_contraction: bool,
) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParam("tol must be positive".into()));
    }
    let m1 = contraction_estimate(forcing.lipschitz(), kernel, 1)?;
    if m1 >= 1.0 && !allow_non_contraction {
        return Err(Error::NotContractive { m1 });
    }
    forcing.verify_lipschitz(u0.dim, 64)?;
    let mut u = u0;
    let mut residuals = Vec::new();
    let mut growth_streak = 0usize;
    for iter in 1..=max_iter {
        let next = upsilon_apply(forcing, kernel, &u, truncation)?;
        let residual = next.sup_distance(&u);
        if let Some(&prev) = residuals.last() {
            growth_streak = if residual > prev {
                growth_streak + 1
            } else {
                0
            };
            if growth_streak >= 5 {
                return Err(Error::Divergence {
                    streak: growth_streak,
                    residual,
                });
            }
        }
        residuals.push(residual);
        u = next;
        u.iterations = iter;
        u.residual = residual;
        if residual <= tol {
            u.converged = true;
            break;
        }
    }
    Ok(SolveReport {
        m1,
        trajectory: u,
        residuals,
    })
}

/// Defects `sup_i ||u(t_i + alpha) - c u(t_i)||` of a solved trajectory at
/// the given shifts, over interior nodes.
///
/// Shifts landing on the grid (an integer number of steps within `1e-9`)
/// compare nodes directly; other shifts interpolate linearly between the
/// two neighbours.
pub fn recurrence_of_solution(
    solution: &Trajectory,
    c: &UnitComplex,
    alphas: &[f64],
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
    let h = solution.grid.step();
    let n = solution.values.len();
    let cv = c.value();
    let mut defects = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let offset = alpha / h;
        let k = offset.round();
        let aligned = (offset - k).abs() <= 1e-9 * offset.max(1.0);
        let k = k as usize;
        let mut worst = f64::MIN;
        let mut any = false;
        for i in solution.interior() {
            if aligned {
                if i + k >= n {
                    break;
                }
                any = true;
                let d: f64 = solution.values[i + k]
                    .iter()
                    .zip(solution.values[i].iter())
                    .map(|(a, b)| (a - cv * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(d);
            } else {
                let pos = i as f64 + offset;
                let lo = pos.floor() as usize;
                if lo + 1 >= n {
                    break;
                }
                any = true;
                let frac = pos - lo as f64;
                let d: f64 = (0..solution.dim)
                    .map(|dd| {
                        let interp = solution.values[lo][dd]
                            + frac * (solution.values[lo + 1][dd] - solution.values[lo][dd]);
                        (interp - cv * solution.values[i][dd]).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(d);
            }
        }
        if !any {
            return Err(Error::InvalidParam(format!(
                "shift alpha = {alpha} exceeds the trajectory grid"
            )));
        }
        defects.push(worst);
    }
    Ok(RecurrenceReport {
        alphas: alphas.to_vec(),
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_exponential() -> Kernel {
        Kernel::Exponential { omega: 1.0 }
    }

    fn forcing_exp_only() -> Forcing {
        Forcing::scalar(1e-9, "e^{it}", |t, _| Complex64::cis(t)).unwrap()
    }

    #[test]
    fn contraction_estimate_factors() {
        let k = unit_exponential();
        assert_abs_diff_eq!(contraction_estimate(0.1, &k, 1).unwrap(), 0.1);
        assert_abs_diff_eq!(
            contraction_estimate(0.1, &k, 3).unwrap(),
            1e-3,
            epsilon = 1e-18
        );
        let frac = Kernel::Fractional { gamma: 0.5 };
        assert_abs_diff_eq!(contraction_estimate(0.5, &frac, 2).unwrap(), 4.0);
    }

    #[test]
    fn upsilon_of_u_independent_forcing_is_closed_form() {
        // Y u = int_0^inf e^{-v} e^{i(t-v)} dv = e^{it} / (1 + i), any u.
        let grid = Grid::new(-40.0, 40.0, 0.01).unwrap();
        let u = Trajectory::zero(grid, 1);
        let out = upsilon_apply(&forcing_exp_only(), &unit_exponential(), &u, 25.0).unwrap();
        let expected = |t: f64| Complex64::cis(t) / Complex64::new(1.0, 1.0);
        for i in out.interior().step_by(500) {
            let t = grid.node(i);
            assert!(
                (out.values[i][0] - expected(t)).norm() < 1e-4,
                "t = {t}: {} vs {}",
                out.values[i][0],
                expected(t)
            );
        }
    }

    #[test]
    fn upsilon_of_zero_forcing_is_zero() {
        let grid = Grid::new(0.0, 10.0, 0.01).unwrap();
        let forcing = Forcing::scalar(1e-9, "zero", |_, _| Complex64::new(0.0, 0.0)).unwrap();
        let u = Trajectory::from_fn(grid, 1, |t| {
            let mut v = CVec::new();
            v.push(Complex64::new(t.sin(), 0.3));
            v
        });
        let out = upsilon_apply(&forcing, &unit_exponential(), &u, 8.0).unwrap();
        for v in &out.values {
            assert_eq!(v[0], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn identity_forcing_fixes_constants() {
        // F(t, u) = u with kernel mass 1: constants are fixed points up to
        // the quadrature's tail and weight error.
        let grid = Grid::new(-30.0, 30.0, 0.005).unwrap();
        let forcing = Forcing::scalar(1.0, "identity", |_, u| u).unwrap();
        let kappa = Complex64::new(0.7, -0.2);
        let u = Trajectory::from_fn(grid, 1, |_| {
            let mut v = CVec::new();
            v.push(kappa);
            v
        });
        let out = upsilon_apply(&forcing, &unit_exponential(), &u, 30.0).unwrap();
        // Trapezoid overweights the convex kernel by ~h^2/12 ~ 2e-6.
        for i in out.interior().step_by(700) {
            assert!((out.values[i][0] - kappa).norm() < 1e-5);
        }
    }

    #[test]
    fn overridden_non_contraction_diverges_cleanly() {
        // With the gate overridden, the growing residuals must trip the
        // divergence detector instead of looping to max_iter.
        let grid = Grid::new(-20.0, 20.0, 0.01).unwrap();
        let forcing =
            Forcing::scalar(2.0, "e^{it} + 2u", |t, u| Complex64::cis(t) + 2.0 * u).unwrap();
        let err = fixed_point_solve(
            &forcing,
            &unit_exponential(),
            Trajectory::zero(grid, 1),
            15.0,
            1e-8,
            40,
            true,
        )
        .unwrap_err();
        match err {
            Error::Divergence { streak, residual } => {
                assert!(streak >= 5);
                assert!(residual > 1.0);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn solve_refuses_non_contraction() {
        let grid = Grid::new(0.0, 5.0, 0.01).unwrap();
        let forcing = Forcing::scalar(2.0, "2u", |_, u| 2.0 * u).unwrap();
        let err = fixed_point_solve(
            &forcing,
            &unit_exponential(),
            Trajectory::zero(grid, 1),
            5.0,
            1e-6,
            10,
            false,
        )
        .unwrap_err();
        match err {
            Error::NotContractive { m1 } => assert_abs_diff_eq!(m1, 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solve_rejects_misdeclared_lipschitz() {
        let grid = Grid::new(0.0, 5.0, 0.01).unwrap();
        // Claims L = 0.01 but is actually 1-Lipschitz.
        let forcing = Forcing::scalar(0.01, "liar", |_, u| u).unwrap();
        let err = fixed_point_solve(
            &forcing,
            &unit_exponential(),
            Trajectory::zero(grid, 1),
            5.0,
            1e-6,
            10,
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParam(_)));
    }

    #[test]
    fn semilinear_solve_converges_with_expected_ratio() {
        let grid = Grid::new(-60.0, 80.0, 2.0 * PI / 1280.0).unwrap();
        let forcing = Forcing::scalar(0.1, "e^{it} + 0.1 sin(Re u)", |t, u| {
            Complex64::cis(t) + Complex64::new(0.1 * u.re.sin(), 0.0)
        })
        .unwrap();
        let report = fixed_point_solve(
            &forcing,
            &unit_exponential(),
            Trajectory::zero(grid, 1),
            18.5,
            1e-8,
            50,
            false,
        )
        .unwrap();
        assert!(report.trajectory.converged);
        assert!(report.trajectory.residual <= 1e-8);
        assert_abs_diff_eq!(report.m1, 0.1);
        for w in report.residuals.windows(2) {
            if w[0] > 1e-12 {
                assert!(
                    w[1] / w[0] <= 0.12,
                    "residual ratio {} above contraction expectation",
                    w[1] / w[0]
                );
            }
        }
    }

    #[test]
    fn one_step_solve_reaches_closed_form() {
        let grid = Grid::new(-50.0, 50.0, 0.005).unwrap();
        let report = fixed_point_solve(
            &forcing_exp_only(),
            &unit_exponential(),
            Trajectory::zero(grid, 1),
            20.0,
            1e-6,
            5,
            false,
        )
        .unwrap();
        assert!(report.trajectory.converged);
        assert!(report.trajectory.iterations <= 2);
        let expected = |t: f64| Complex64::cis(t) / Complex64::new(1.0, 1.0);
        for i in report.trajectory.interior().step_by(997) {
            let t = grid.node(i);
            assert!((report.trajectory.values[i][0] - expected(t)).norm() < 1e-4);
        }
    }

    #[test]
    fn recurrence_of_closed_form_solution() {
        // e^{it}/(1+i) has exact c-period theta for c = e^{i theta}.
        let grid = Grid::new(0.0, 60.0, 0.01).unwrap();
        let traj = Trajectory::from_fn(grid, 1, |t| {
            let mut v = CVec::new();
            v.push(Complex64::cis(t) / Complex64::new(1.0, 1.0));
            v
        });
        let theta = 0.9174;
        let c = UnitComplex::from_angle(theta).unwrap();
        let rep = recurrence_of_solution(&traj, &c, &[theta]).unwrap();
        assert!(rep.defects[0] < 1e-4, "defect {}", rep.defects[0]);
    }

    #[test]
    fn recurrence_of_zero_solution_is_zero() {
        let grid = Grid::new(0.0, 10.0, 0.1).unwrap();
        let traj = Trajectory::zero(grid, 1);
        let rep = recurrence_of_solution(&traj, &UnitComplex::i(), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(rep.defects, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn recurrence_rejects_excessive_shift() {
        let grid = Grid::new(0.0, 10.0, 0.1).unwrap();
        let traj = Trajectory::zero(grid, 1);
        assert!(recurrence_of_solution(&traj, &UnitComplex::one(), &[100.0]).is_err());
    }

    #[test]
    fn contraction_telescopes_over_iterations() {
        // ||Y^n u1 - Y^n u2|| <= M1^n ||u1 - u2|| + quadrature slack.
        let grid = Grid::new(-30.0, 30.0, 0.01).unwrap();
        let forcing = Forcing::scalar(0.2, "0.2 cos(Re u)", |_, u| {
            Complex64::new(0.2 * u.re.cos(), 0.0)
        })
        .unwrap();
        let kernel = unit_exponential();
        let mut u1 = Trajectory::from_fn(grid, 1, |t| {
            let mut v = CVec::new();
            v.push(Complex64::new((0.3 * t).sin(), 0.5));
            v
        });
        let mut u2 = Trajectory::from_fn(grid, 1, |t| {
            let mut v = CVec::new();
            v.push(Complex64::new(-(0.7 * t).cos(), -0.1));
            v
        });
        let m1 = contraction_estimate(0.2, &kernel, 1).unwrap();
        let d0 = u1.sup_distance(&u2);
        for n in 1..=4 {
            u1 = upsilon_apply(&forcing, &kernel, &u1, 20.0).unwrap();
            u2 = upsilon_apply(&forcing, &kernel, &u2, 20.0).unwrap();
            let dn = u1.sup_distance(&u2);
            let bound = m1.powi(n) * d0 * (1.0 + 1e-4) + 1e-9;
            assert!(dn <= bound, "n = {n}: {dn} > {bound}");
        }
    }
}

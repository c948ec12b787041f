//! Self-similar viscous problem on `[−M, M]`, solved by damped fixed-point
//! iteration of its representation formula.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::flux::{lerp, FluxFunction};
use crate::h_criterion::{horizon_m, CrdSolution, HFunction};
use crate::par::Execution;

pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_DAMPING: f64 = 0.5;
pub const DEFAULT_GRID: usize = 4000;
/// Floor of the adaptive damping.
pub const MIN_DAMPING: f64 = 1e-2;
/// Fixed-point tolerance relative to `|u_R − u_L|`.
pub const TOL_FIX: f64 = 1e-10;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Exact `v^ε(ξ) = erf(ξ/(√2 ε)) / erf(M/(√2 ε))`, the solution of
/// `−ξ v' = ε² v''` with `v(∓M) = ∓1`.
pub fn v_profile(eps: f64, m: f64, xi: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return arg("eps must be positive");
    }
    if !(xi.abs() <= m) {
        return arg(format!("ξ = {xi} lies outside [−{m}, {m}]"));
    }
    Ok(libm::erf(xi / (SQRT_2 * eps)) / libm::erf(m / (SQRT_2 * eps)))
}

/// Integrand `2s − (1 − v) f₋'(u) − (1 + v) f₊'(u)` of `2h^ε`.
fn h_integrand(f_minus: &FluxFunction, f_plus: &FluxFunction, s: f64, u: f64, v: f64) -> f64 {
    2.0 * s - (1.0 - v) * f_minus.slope(u) - (1.0 + v) * f_plus.slope(u)
}

/// `h^ε` at every node, by trapezoid quadrature from the node at 0.
fn h_eps_all(f_minus: &FluxFunction, f_plus: &FluxFunction, u: &[f64], v: &[f64], grid: &[f64], zero: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..grid.len()).map(|i| h_integrand(f_minus, f_plus, grid[i], u[i], v[i])).collect();
    let mut h = vec![0.0; grid.len()];
    for i in zero + 1..grid.len() {
        h[i] = h[i - 1] + 0.25 * (grid[i] - grid[i - 1]) * (g[i] + g[i - 1]);
    }
    for i in (0..zero).rev() {
        h[i] = h[i + 1] - 0.25 * (grid[i + 1] - grid[i]) * (g[i] + g[i + 1]);
    }
    h
}

/// `h^ε(grid[xi_index])` for sampled `u^ε`, `v^ε`.
///
/// Uses `(1 − v) f₋'` and `(1 + v) f₊'`, the weights of the viscous
/// equation, so that `h^ε → h` as `v^ε → sign ξ`.
pub fn h_eps(f_minus: &FluxFunction, f_plus: &FluxFunction, u: &[f64], v: &[f64], grid: &[f64], xi_index: usize) -> Result<f64> {
    if u.len() != grid.len() || v.len() != grid.len() || xi_index >= grid.len() {
        return arg("h_eps needs aligned samples and a valid index");
    }
    let Some(zero) = grid.iter().position(|&x| x == 0.0) else {
        return arg("grid must contain 0 as a node");
    };
    Ok(h_eps_all(f_minus, f_plus, u, v, grid, zero)[xi_index])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViscousSolution {
    pub eps: f64,
    pub m: f64,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `h^ε` of the returned iterate.
    pub h: Vec<f64>,
    pub iterations: usize,
    pub final_update: f64,
}

impl ViscousSolution {
    /// Linear interpolation of `u^ε`.
    pub fn eval(&self, xi: f64) -> f64 {
        let g = &self.grid;
        let x = xi.clamp(g[0], g[g.len() - 1]);
        let i = g.partition_point(|&t| t <= x).clamp(1, g.len() - 1);
        let t = (x - g[i - 1]) / (g[i] - g[i - 1]);
        self.u[i - 1] + t * (self.u[i] - self.u[i - 1])
    }

    /// Index of the node at ξ = 0.
    pub fn zero_index(&self) -> usize {
        self.grid.iter().position(|&x| x == 0.0).expect("grid contains 0")
    }
}

/// Uniform grid of `n + 1` nodes on `[−M, M]`, with 0 inserted if missing.
pub fn viscous_grid(m: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=n).map(|i| lerp(-m, m, i, n)).collect();
    if n.is_multiple_of(2) {
        g[n / 2] = 0.0;
    } else {
        g.insert(n / 2 + 1, 0.0);
    }
    g
}

/// The representation map `F(u)` and the `h^ε` it was built from.
#[allow(clippy::too_many_arguments)]
fn representation(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u_l: f64,
    u_r: f64,
    eps: f64,
    u: &[f64],
    v: &[f64],
    grid: &[f64],
    zero: usize,
) -> (Vec<f64>, Vec<f64>) {
    let h = h_eps_all(f_minus, f_plus, u, v, grid, zero);
    // exp(−h/ε) spans far more than the double range: shift by the max.
    let top = h.iter().map(|&x| -x / eps).fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = h.iter().map(|&x| (-x / eps - top).exp()).collect();
    let mut cum = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        cum[i] = cum[i - 1] + 0.5 * (grid[i] - grid[i - 1]) * (w[i] + w[i - 1]);
    }
    let total = cum[grid.len() - 1];
    let f = cum.iter().map(|&c| u_l + (u_r - u_l) * (c / total)).collect();
    (f, h)
}

/// Damped Picard iteration `u ← (1 − d) u + d F(u)` from the linear
/// interpolant, until the fixed-point residual `‖F(u) − u‖∞` drops below
/// `TOL_FIX · |u_R − u_L|`. `d` starts at `damping` and is halved (down
/// to `MIN_DAMPING`) whenever the update grows.
#[allow(clippy::too_many_arguments)]
pub fn solve_viscous(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u_l: f64,
    u_r: f64,
    eps: f64,
    n: usize,
    max_iter: usize,
    damping: f64,
) -> Result<ViscousSolution> {
    if !(eps > 0.0) {
        return arg("eps must be positive");
    }
    if n < 64 {
        return arg("viscous grid needs n >= 64");
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return arg("damping must lie in (0, 1]");
    }
    let (lo, hi) = (u_l.min(u_r), u_l.max(u_r));
    f_minus.check_interval(lo, hi)?;
    f_plus.check_interval(lo, hi)?;
    let m = horizon_m(f_minus, f_plus, u_l, u_r).max(f64::MIN_POSITIVE.sqrt());
    let grid = viscous_grid(m, n);
    let zero = grid.iter().position(|&x| x == 0.0).expect("0 inserted");
    let big = libm::erf(m / (SQRT_2 * eps));
    let v: Vec<f64> = grid.iter().map(|&x| libm::erf(x / (SQRT_2 * eps)) / big).collect();
    let mut u: Vec<f64> = grid.iter().map(|&x| u_l + (u_r - u_l) * (x + m) / (2.0 * m)).collect();
    let last = grid.len() - 1;
    u[0] = u_l;
    u[last] = u_r;

    let tol = TOL_FIX * (u_r - u_l).abs();
    let mut final_update = f64::INFINITY;
    let mut last_residual = f64::INFINITY;
    let mut damping = damping;
    for it in 1..=max_iter.max(1) {
        let (f, _) = representation(f_minus, f_plus, u_l, u_r, eps, &u, &v, &grid, zero);
        let residual = (1..last).map(|i| (f[i] - u[i]).abs()).fold(0.0_f64, f64::max);
        if !residual.is_finite() {
            return Err(Error::Numerical("viscous iterate is not finite".into()));
        }
        if residual <= tol {
            // u is a fixed point to tolerance; take the undamped image.
            u[1..last].copy_from_slice(&f[1..last]);
            final_update = residual;
            let h = h_eps_all(f_minus, f_plus, &u, &v, &grid, zero);
            return Ok(ViscousSolution { eps, m, grid, u, v, h, iterations: it, final_update });
        }
        // A growing residual means the damped map overshoots: damp harder.
        if residual > last_residual && damping > MIN_DAMPING {
            damping = (0.5 * damping).max(MIN_DAMPING);
        }
        last_residual = residual;
        for i in 1..last {
            u[i] += damping * (f[i] - u[i]);
        }
        final_update = damping * residual;
    }
    Err(Error::Convergence { iterations: max_iter, final_update })
}

/// One row of [`viscous_limit_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub eps: f64,
    pub iterations: usize,
    pub final_update: f64,
    /// `u^ε(−δ)`, `u^ε(0)`, `u^ε(δ)` with `δ = min(3ε, M/2)`.
    pub trace_minus: f64,
    pub trace_zero: f64,
    pub trace_plus: f64,
    /// `∫|u^ε − u|` against the reference solution.
    pub l1_distance: Option<f64>,
    /// `sup |h^ε − h|` against the reference solution.
    pub h_sup_distance: Option<f64>,
}

/// Solves for every ε (concurrently under the parallel policy) and
/// compares each solution with `reference` when given.
#[allow(clippy::too_many_arguments)]
pub fn viscous_limit_study(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u_l: f64,
    u_r: f64,
    eps_list: &[f64],
    n: usize,
    reference: Option<&CrdSolution>,
    execution: Execution,
) -> Result<Vec<(StudyRow, ViscousSolution)>> {
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return arg("eps list must be strictly decreasing");
    }
    let href = reference.map(HFunction::from_solution);
    let runs = execution.map_slice(eps_list, |&eps| solve_viscous(f_minus, f_plus, u_l, u_r, eps, n, DEFAULT_MAX_ITER, DEFAULT_DAMPING));
    let mut rows = Vec::with_capacity(runs.len());
    for run in runs {
        let sol = run?;
        let delta = (3.0 * sol.eps).min(0.5 * sol.m);
        let l1_distance = reference.map(|r| {
            let g = &sol.grid;
            (1..g.len())
                .map(|i| 0.5 * (g[i] - g[i - 1]) * ((sol.u[i] - r.eval(g[i])).abs() + (sol.u[i - 1] - r.eval(g[i - 1])).abs()))
                .sum()
        });
        let h_sup_distance = href.as_ref().map(|h| {
            sol.grid.iter().zip(&sol.h).filter(|(x, _)| x.abs() <= h.m).map(|(&x, &he)| (he - h.eval(x)).abs()).fold(0.0, f64::max)
        });
        rows.push((
            StudyRow {
                eps: sol.eps,
                iterations: sol.iterations,
                final_update: sol.final_update,
                trace_minus: sol.eval(-delta),
                trace_zero: sol.u[sol.zero_index()],
                trace_plus: sol.eval(delta),
                l1_distance,
                h_sup_distance,
            },
            sol,
        ));
    }
    Ok(rows)
}

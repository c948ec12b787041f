//! Intermediate states `ū` of double-waved solutions: a left wave, the
//! constant `ū` across the interface, and a right wave.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::flux::{lerp, sonic_points, FluxFunction, DEFAULT_ENVELOPE_GRID};
use crate::h_criterion::{build_h, check_selection, check_trace_conditions, CrdSolution, HFunction, DEFAULT_H_GRID};
use crate::half_riemann::chord_slope;
use crate::par::Execution;

pub const DEFAULT_SCAN: usize = 4001;
pub const TOL_BIS: f64 = 1e-10;
/// Distance to a datum or sonic point below which a root is flagged.
pub const TOL_DEGENERATE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleWaveKind {
    /// Increasing data (`u_L < u_R`); rarefactions when the fluxes are convex.
    DoubleRarefaction,
    /// Decreasing data (`u_L > u_R`); shocks when the fluxes are convex.
    DoubleShock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleWaveCandidate {
    pub ubar: f64,
    pub kind: DoubleWaveKind,
    /// Value of the defining equation at `ubar`.
    pub residual: f64,
    pub constraints_ok: bool,
    /// `ubar` lies within `TOL_DEGENERATE` of a datum or sonic point.
    pub boundary_degenerate: bool,
}

/// `f₋'(ū) + f₊'(ū)`; vanishes at a balanced double rarefaction.
pub fn raref_residual(f_minus: &FluxFunction, f_plus: &FluxFunction, ubar: f64) -> f64 {
    f_minus.slope(ubar) + f_plus.slope(ubar)
}

/// `κ(ū) = λ₋(½λ₋ − f₋'(ū)) − λ₊(½λ₊ − f₊'(ū))` with `λ₋`, `λ₊` the shock
/// speeds `u_L → ū` and `ū → u_R`.
pub fn shock_residual(f_minus: &FluxFunction, f_plus: &FluxFunction, u_l: f64, u_r: f64, ubar: f64) -> Result<f64> {
    if ubar == u_l || ubar == u_r {
        return arg("shock residual is undefined when ū equals a datum");
    }
    let lm = chord_slope(f_minus, u_l, ubar);
    let lp = chord_slope(f_plus, ubar, u_r);
    Ok(lm * (0.5 * lm - f_minus.slope(ubar)) - lp * (0.5 * lp - f_plus.slope(ubar)))
}

/// Double-rarefaction state `c/2` for `f₋ = u²/2`, `f₊ = (u − c)²/2`.
pub fn quadratic_ubar_rarefaction(c: f64) -> f64 {
    0.5 * c
}

/// Double-shock state for `f₋ = u²/2`, `f₊ = (u − c)²/2`, with the
/// admissibility constraints of the quadratic case evaluated in
/// `constraints_ok`.
pub fn quadratic_ubar_shock(c: f64, u_l: f64, u_r: f64) -> Result<DoubleWaveCandidate> {
    let den = 2.0 * (u_r - u_l - 4.0 * c);
    if den == 0.0 {
        return arg("double-shock formula has a zero denominator");
    }
    let ubar = (u_r * u_r - u_l * u_l - 4.0 * c * c) / den;
    let residual = if ubar != u_l && ubar != u_r {
        shock_residual(&FluxFunction::quadratic(0.0), &FluxFunction::quadratic(c), u_l, u_r, ubar)?
    } else {
        f64::NAN
    };
    Ok(DoubleWaveCandidate {
        ubar,
        kind: DoubleWaveKind::DoubleShock,
        residual,
        constraints_ok: quadratic_shock_constraints(c, u_l, u_r),
        boundary_degenerate: false,
    })
}

/// `2c < u_R < c/2`, `u_R − u_L > 2c` and
/// `u_R − 4c − 2√(c(5c − 2u_R)) < u_L < u_R + 2√(c(2u_R − c))`.
pub fn quadratic_shock_constraints(c: f64, u_l: f64, u_r: f64) -> bool {
    let r1 = c * (5.0 * c - 2.0 * u_r);
    let r2 = c * (2.0 * u_r - c);
    2.0 * c < u_r
        && u_r < 0.5 * c
        && u_r - u_l > 2.0 * c
        && r1 >= 0.0
        && r2 >= 0.0
        && u_r - 4.0 * c - 2.0 * r1.sqrt() < u_l
        && u_l < u_r + 2.0 * r2.sqrt()
}

/// Knobs of [`find_all_double_wave_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub scan_n: usize,
    pub envelope_n: usize,
    pub h_grid: usize,
    pub tol_bis: f64,
    pub execution: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            scan_n: DEFAULT_SCAN,
            envelope_n: DEFAULT_ENVELOPE_GRID,
            h_grid: DEFAULT_H_GRID,
            tol_bis: TOL_BIS,
            execution: Execution::default(),
        }
    }
}

/// [`find_all_double_wave_with`] with default knobs and the given scan size.
pub fn find_all_double_wave(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u_l: f64,
    u_r: f64,
    scan_n: usize,
) -> Result<Vec<DoubleWaveCandidate>> {
    find_all_double_wave_with(f_minus, f_plus, u_l, u_r, &ScanOptions { scan_n, ..ScanOptions::default() })
}

/// All roots of the selection equation for double-waved solutions.
///
/// Convex pairs use `f₋' + f₊'` (increasing data) or `κ` (decreasing data);
/// other pairs use the difference of the half-line minima of `h`. The
/// residual is only defined where both fans fit their half-lines. Every
/// sign change between consecutive defined samples is refined by
/// bisection, then kept if the constructed solution passes the trace and
/// selection tests. Output is sorted by `ū`.
pub fn find_all_double_wave_with(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u_l: f64,
    u_r: f64,
    opts: &ScanOptions,
) -> Result<Vec<DoubleWaveCandidate>> {
    if u_l == u_r {
        return arg("double waves need u_L != u_R");
    }
    if opts.scan_n < 2 {
        return arg("scan needs at least two samples");
    }
    let (lo, hi) = (u_l.min(u_r), u_l.max(u_r));
    f_minus.check_interval(lo, hi)?;
    f_plus.check_interval(lo, hi)?;
    let convex = f_minus.is_convex_on(lo, hi) && f_plus.is_convex_on(lo, hi);
    let kind = if u_l < u_r { DoubleWaveKind::DoubleRarefaction } else { DoubleWaveKind::DoubleShock };

    // Envelopes of convex fluxes are exact on any grid, so the fit test is cheap.
    let scan_env = if convex { opts.envelope_n.min(64) } else { opts.envelope_n };
    let residual = |ubar: f64| -> Option<f64> {
        let sol = CrdSolution::double_wave(f_minus, f_plus, u_l, ubar, u_r, scan_env).ok()?;
        if convex {
            match kind {
                DoubleWaveKind::DoubleRarefaction => Some(raref_residual(f_minus, f_plus, ubar)),
                DoubleWaveKind::DoubleShock => shock_residual(f_minus, f_plus, u_l, u_r, ubar).ok(),
            }
        } else {
            let h = HFunction::from_solution(&sol);
            Some(h.left_min() - h.right_min())
        }
    };

    // Open interval: samples strictly between the data.
    let n = opts.scan_n;
    let xs: Vec<f64> = (1..=n).map(|i| lerp(lo, hi, i, n + 1)).collect();
    let rs: Vec<Option<f64>> = opts.execution.map_slice(&xs, |&u| residual(u));

    // Where the residual becomes undefined (a fan stops fitting), a root can
    // sit between the domain edge and the last sample. Add the edge itself.
    let edges: Vec<usize> = (0..n.saturating_sub(1)).filter(|&i| rs[i].is_some() != rs[i + 1].is_some()).collect();
    let edge_points = opts.execution.map_slice(&edges, |&i| {
        let (mut a, mut b) = if rs[i].is_some() { (xs[i], xs[i + 1]) } else { (xs[i + 1], xs[i]) };
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (b - a).abs() <= opts.tol_bis || m == a || m == b {
                break;
            }
            if residual(m).is_some() {
                a = m;
            } else {
                b = m;
            }
        }
        (a, residual(a))
    });
    let mut pts: Vec<(f64, Option<f64>)> = xs.iter().copied().zip(rs).chain(edge_points).collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    for (i, &(x, r)) in pts.iter().enumerate() {
        match r {
            Some(r) if r == 0.0 => brackets.push((x, x, r)),
            Some(r) => {
                if let Some(&(y, Some(s))) = pts.get(i + 1) {
                    if s != 0.0 && (r < 0.0) != (s < 0.0) {
                        brackets.push((x, y, r));
                    }
                }
            }
            None => {}
        }
    }
    let roots: Vec<Option<f64>> = opts.execution.map_slice(&brackets, |&(a, b, ra)| refine(&residual, a, b, ra, opts.tol_bis));

    let mut sonic = sonic_points(f_minus, lo, hi)?;
    sonic.extend(sonic_points(f_plus, lo, hi)?);
    let mut out: Vec<DoubleWaveCandidate> = Vec::new();
    for ubar in roots.into_iter().flatten() {
        if out.last().is_some_and(|c| (c.ubar - ubar).abs() < 10.0 * opts.tol_bis) {
            continue;
        }
        let Ok(sol) = CrdSolution::double_wave(f_minus, f_plus, u_l, ubar, u_r, opts.envelope_n) else {
            continue;
        };
        let trace = check_trace_conditions(&sol);
        let Ok(hp) = build_h(&sol, opts.h_grid) else {
            continue;
        };
        let sel = check_selection(&hp, &sol);
        if !(trace.pass && sel.pass) {
            continue;
        }
        let near = |x: f64| (ubar - x).abs() <= TOL_DEGENERATE;
        let boundary_degenerate = near(u_l) || near(u_r) || sonic.iter().any(|&s| near(s));
        let ordering_ok = !convex || sonic_ordering(f_minus, f_plus, ubar);
        out.push(DoubleWaveCandidate {
            ubar,
            kind,
            residual: residual(ubar).unwrap_or(f64::NAN),
            constraints_ok: ordering_ok && !boundary_degenerate,
            boundary_degenerate,
        });
    }
    out.sort_by(|a, b| a.ubar.total_cmp(&b.ubar));
    Ok(out)
}

/// `u⋆₊ < ū < u⋆₋` in the convex case: `f₊'(ū) > 0 > f₋'(ū)`.
fn sonic_ordering(f_minus: &FluxFunction, f_plus: &FluxFunction, ubar: f64) -> bool {
    f_minus.slope(ubar) < 0.0 && f_plus.slope(ubar) > 0.0
}

fn refine(residual: &(impl Fn(f64) -> Option<f64> + Sync), mut a: f64, mut b: f64, mut ra: f64, tol: f64) -> Option<f64> {
    if a == b {
        return Some(a);
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let rm = residual(m)?;
        if rm == 0.0 {
            return Some(m);
        }
        if (rm < 0.0) == (ra < 0.0) {
            a = m;
            ra = rm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

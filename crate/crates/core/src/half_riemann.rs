//! Entropy wave fans on one half-line, built from flux envelopes.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::flux::{bisect, lower_convex_envelope, upper_concave_envelope, FluxFunction};

/// Default number of sampled chord points in the Oleinik check.
pub const DEFAULT_K_SAMPLES: usize = 64;
/// Relative tolerance on wave speeds against the interface.
pub const TOL_SPEED: f64 = 1e-9;
/// Rankine-Hugoniot tolerance factor, scaled by `1 + |f|`.
pub const TOL_RH: f64 = 1e-8;

const TOL_INVERT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Constant,
}

/// One wave of a fan. `u_left` is the state on the low-ξ side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub kind: WaveKind,
    pub u_left: f64,
    pub u_right: f64,
    pub speed_lo: f64,
    pub speed_hi: f64,
    /// Set when the wave touches ξ = 0.
    pub at_interface: bool,
}

impl Wave {
    pub fn shock(f: &FluxFunction, u_left: f64, u_right: f64) -> Self {
        let s = chord_slope(f, u_left, u_right);
        Wave { kind: WaveKind::Shock, u_left, u_right, speed_lo: s, speed_hi: s, at_interface: false }
    }

    pub fn rarefaction(f: &FluxFunction, u_left: f64, u_right: f64) -> Self {
        Wave { kind: WaveKind::Rarefaction, u_left, u_right, speed_lo: f.slope(u_left), speed_hi: f.slope(u_right), at_interface: false }
    }

    /// Whether the wave carries variation of `u`.
    pub fn is_wave(&self) -> bool {
        self.kind != WaveKind::Constant
    }

    /// `|σ (u_r − u_l) − (f(u_r) − f(u_l))|` for shocks, zero otherwise.
    pub fn rh_residual(&self, f: &FluxFunction) -> f64 {
        match self.kind {
            WaveKind::Shock => (self.speed_lo * (self.u_right - self.u_left) - (f.value(self.u_right) - f.value(self.u_left))).abs(),
            _ => 0.0,
        }
    }
}

/// Slope of the chord of `f` between two states (`f'` when they coincide).
pub fn chord_slope(f: &FluxFunction, a: f64, b: f64) -> f64 {
    if a == b {
        f.slope(a)
    } else {
        (f.value(b) - f.value(a)) / (b - a)
    }
}

/// Self-similar entropy solution on one half-line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFan {
    pub side: Side,
    pub flux: FluxFunction,
    pub boundary_state: f64,
    pub trace: f64,
    /// Waves sorted by increasing speed.
    pub waves: Vec<Wave>,
    /// `(Λ₋, λ₋)` on the left, `(λ₊, Λ₊)` on the right; zeros when empty.
    pub speed_bounds: (f64, f64),
}

impl WaveFan {
    /// State at ξ → −∞ side of the fan.
    pub fn far_left_state(&self) -> f64 {
        match self.side {
            Side::Left => self.boundary_state,
            Side::Right => self.trace,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.waves.iter().any(Wave::is_wave)
    }

    /// Closed ξ-intervals covered by the (non-constant) waves.
    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.waves.iter().filter(|w| w.is_wave()).map(|w| (w.speed_lo, w.speed_hi)).collect()
    }

    /// Whether some wave sits strictly inside the open half-line.
    pub fn has_interior_waves(&self) -> bool {
        let tol = TOL_SPEED * (1.0 + self.speed_bounds.0.abs().max(self.speed_bounds.1.abs()));
        self.waves.iter().filter(|w| w.is_wave()).any(|w| match self.side {
            Side::Left => w.speed_lo < -tol,
            Side::Right => w.speed_hi > tol,
        })
    }
}

/// Direction of a one-sided limit in ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    FromBelow,
    FromAbove,
}

/// Waves of the entropy solution of the Riemann problem `ul | ur` for `f`,
/// sorted by speed. Interior plateaus appear as constant waves.
pub fn riemann_waves(f: &FluxFunction, ul: f64, ur: f64, n: usize) -> Result<Vec<Wave>> {
    if !ul.is_finite() || !ur.is_finite() {
        return arg("Riemann states must be finite");
    }
    if ul == ur {
        return Ok(Vec::new());
    }
    let increasing = ul < ur;
    let (a, b) = if increasing { (ul, ur) } else { (ur, ul) };
    let env = if increasing { lower_convex_envelope(f, a, b, n)? } else { upper_concave_envelope(f, a, b, n)? };
    // Segments in ξ order as (state at low ξ, state at high ξ, contact).
    let mut segs: Vec<(f64, f64, bool)> =
        (0..env.contact_flags.len()).map(|i| (env.breakpoints[i], env.breakpoints[i + 1], env.contact_flags[i])).collect();
    if !increasing {
        segs.reverse();
        for s in &mut segs {
            *s = (s.1, s.0, s.2);
        }
    }
    // Pin the data endpoints exactly.
    segs.first_mut().unwrap().0 = ul;
    segs.last_mut().unwrap().1 = ur;

    let mut raw: Vec<(WaveKind, f64, f64)> = Vec::new();
    for (p, q, contact) in segs {
        match (contact, raw.last_mut()) {
            (true, Some((WaveKind::Rarefaction, _, end))) => *end = q,
            (true, _) => raw.push((WaveKind::Rarefaction, p, q)),
            (false, _) => raw.push((WaveKind::Shock, p, q)),
        }
    }
    refine_tangencies(f, &mut raw, (b - a) / n as f64, ul, ur);

    let mut waves: Vec<Wave> = Vec::with_capacity(raw.len() * 2);
    for (kind, p, q) in raw {
        let w = match kind {
            WaveKind::Shock => Wave::shock(f, p, q),
            _ => Wave::rarefaction(f, p, q),
        };
        if let Some(prev) = waves.last() {
            if w.speed_lo > prev.speed_hi {
                waves.push(Wave {
                    kind: WaveKind::Constant,
                    u_left: prev.u_right,
                    u_right: prev.u_right,
                    speed_lo: prev.speed_hi,
                    speed_hi: w.speed_lo,
                    at_interface: false,
                });
            }
        }
        waves.push(w);
    }
    Ok(waves)
}

/// Moves the grid tangency points of shocks onto the exact tangency of the
/// chord, keeping neighbouring rarefactions attached.
fn refine_tangencies(f: &FluxFunction, raw: &mut Vec<(WaveKind, f64, f64)>, h: f64, ul: f64, ur: f64) {
    let (lo, hi) = (ul.min(ur), ul.max(ur));
    let tangency = |p: f64, q0: f64| -> f64 {
        // g(q) = f'(q)(q − p) − (f(q) − f(p)) vanishes at the tangency point.
        let g = |q: f64| f.slope(q) * (q - p) - (f.value(q) - f.value(p));
        let a = (q0 - 2.0 * h).max(lo);
        let b = (q0 + 2.0 * h).min(hi);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            a
        } else if gb == 0.0 {
            b
        } else if (ga < 0.0) != (gb < 0.0) {
            bisect(a, b, 1e-15, g)
        } else {
            q0
        }
    };
    for i in 0..raw.len() {
        if raw[i].0 != WaveKind::Shock {
            continue;
        }
        let free_l = i > 0 && raw[i].1 != ul;
        let free_r = i + 1 < raw.len() && raw[i].2 != ur;
        for _ in 0..if free_l && free_r { 4 } else { 1 } {
            if free_l {
                raw[i].1 = tangency(raw[i].2, raw[i].1);
            }
            if free_r {
                raw[i].2 = tangency(raw[i].1, raw[i].2);
            }
        }
        if free_l {
            raw[i - 1].2 = raw[i].1;
        }
        if free_r {
            raw[i + 1].1 = raw[i].2;
        }
    }
    // Drop rarefactions squeezed to nothing or reversed by the refinement.
    raw.retain(|&(k, p, q)| k == WaveKind::Shock || ((q - p) * (ur - ul) > 0.0));
    for i in 1..raw.len() {
        raw[i].1 = raw[i - 1].2;
    }
}

/// Builds the fan joining `boundary_state` to the interface `trace` on the
/// given side, or fails when a wave would leave the half-line.
pub fn solve_half(f: &FluxFunction, boundary_state: f64, trace: f64, side: Side, n: usize) -> Result<WaveFan> {
    let (ul, ur) = match side {
        Side::Left => (boundary_state, trace),
        Side::Right => (trace, boundary_state),
    };
    let mut waves = riemann_waves(f, ul, ur, n)?;
    let scale = waves.iter().fold(0.0_f64, |m, w| m.max(w.speed_lo.abs()).max(w.speed_hi.abs()));
    let tol = TOL_SPEED * (1.0 + scale);
    for w in waves.iter_mut().filter(|w| w.kind != WaveKind::Constant) {
        let (bad, edge) = match side {
            Side::Left => (w.speed_hi > tol, &mut w.speed_hi),
            Side::Right => (w.speed_lo < -tol, &mut w.speed_lo),
        };
        if bad {
            return Err(Error::Admissibility(format!(
                "{:?} fan from {boundary_state} to trace {trace} needs a wave of speed {} on the wrong side",
                side, *edge
            )));
        }
        if edge.abs() <= tol {
            *edge = 0.0;
            if w.kind == WaveKind::Shock {
                w.speed_lo = 0.0;
                w.speed_hi = 0.0;
            }
            w.at_interface = true;
        }
    }
    let active: Vec<&Wave> = waves.iter().filter(|w| w.is_wave()).collect();
    let speed_bounds = match (active.first(), active.last()) {
        (Some(a), Some(b)) => (a.speed_lo, b.speed_hi),
        _ => (0.0, 0.0),
    };
    Ok(WaveFan { side, flux: f.clone(), boundary_state, trace, waves, speed_bounds })
}

/// `u(ξ)` from the fan; `ξ = 0` returns the trace.
pub fn eval_fan(fan: &WaveFan, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Ok(fan.trace);
    }
    eval_fan_limit(fan, xi, Limit::FromAbove)
}

/// One-sided limit of `u` at `ξ`. Needed at shock locations.
pub fn eval_fan_limit(fan: &WaveFan, xi: f64, limit: Limit) -> Result<f64> {
    let ok = match fan.side {
        Side::Left => xi <= 0.0,
        Side::Right => xi >= 0.0,
    };
    if !ok || xi.is_nan() {
        return arg(format!("ξ = {xi} is not on the {:?} half-line", fan.side));
    }
    let below = limit == Limit::FromBelow;
    let mut state = fan.far_left_state();
    for w in fan.waves.iter().filter(|w| w.is_wave()) {
        if xi < w.speed_lo || (xi == w.speed_lo && below) {
            return Ok(state);
        }
        if w.kind == WaveKind::Rarefaction && (xi < w.speed_hi || (xi == w.speed_hi && below)) {
            return Ok(invert_rarefaction(&fan.flux, w, xi));
        }
        state = w.u_right;
    }
    Ok(state)
}

/// Solves `f'(u) = ξ` on the state interval of a rarefaction.
fn invert_rarefaction(f: &FluxFunction, w: &Wave, xi: f64) -> f64 {
    if xi <= w.speed_lo {
        return w.u_left;
    }
    if xi >= w.speed_hi {
        return w.u_right;
    }
    // f' − ξ is negative at u_left and positive at u_right.
    bisect(w.u_left, w.u_right, TOL_INVERT, |u| f.slope(u) - xi)
}

/// Result of the Oleinik chord test over the shocks of a fan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub shocks_checked: usize,
    /// Largest amount by which a chord crosses the graph (0 when admissible).
    pub max_violation: f64,
    /// Largest Rankine-Hugoniot residual.
    pub max_rh_residual: f64,
}

/// Samples the Oleinik condition at `k_samples` interior points per shock.
pub fn check_entropy(fan: &WaveFan, k_samples: usize) -> EntropyReport {
    let f = &fan.flux;
    let mut report = EntropyReport { shocks_checked: 0, max_violation: 0.0, max_rh_residual: 0.0 };
    for w in fan.waves.iter().filter(|w| w.kind == WaveKind::Shock) {
        report.shocks_checked += 1;
        report.max_rh_residual = report.max_rh_residual.max(w.rh_residual(f));
        report.max_violation = report.max_violation.max(oleinik_violation(f, w.u_left, w.u_right, k_samples));
    }
    report
}

/// Largest crossing of the chord `ul → ur` through the graph of `f` at
/// `k_samples` interior points. Increasing jumps need the chord below the
/// graph, decreasing jumps above it.
pub fn oleinik_violation(f: &FluxFunction, ul: f64, ur: f64, k_samples: usize) -> f64 {
    if ul == ur {
        return 0.0;
    }
    let s = chord_slope(f, ul, ur);
    let fl = f.value(ul);
    let orient = if ul < ur { 1.0 } else { -1.0 };
    (1..=k_samples)
        .map(|j| {
            let k = ul + (ur - ul) * (j as f64 / (k_samples + 1) as f64);
            let chord = fl + s * (k - ul);
            orient * (chord - f.value(k))
        })
        .fold(0.0_f64, f64::max)
}

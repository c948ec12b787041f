//! The function `h(ξ; u)` of a candidate coupled solution, its half-line
//! minima and argmin set, and the selection and trace tests built on it.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::flux::{lerp, FluxFunction};
use crate::half_riemann::{eval_fan_limit, solve_half, Limit, Side, WaveFan, WaveKind};
use crate::inner_layer::LayerProfile;

/// Samples used for the horizon supremum.
pub const HORIZON_SAMPLES: usize = 10_001;
/// Safety factor applied to the horizon supremum.
pub const HORIZON_SAFETY: f64 = 1.05;
/// Default number of ξ samples of a profile.
pub const DEFAULT_H_GRID: usize = 20_001;
pub const TOL_ARGMIN: f64 = 1e-8;
pub const TOL_SEL: f64 = 1e-6;
pub const TOL_H: f64 = 1e-6;

/// A candidate coupled Riemann solution: one fan per half-line joined at the
/// interface by the traces `u₋`, `u₊`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrdSolution {
    pub left_fan: WaveFan,
    pub right_fan: WaveFan,
    pub u_minus: f64,
    pub u_plus: f64,
    pub intermediate: Option<f64>,
    pub layer: Option<LayerProfile>,
    pub m: f64,
}

impl CrdSolution {
    /// Builds both fans for the given traces. Fails when the states are not
    /// monotone or a fan leaves its half-line.
    pub fn new(f_minus: &FluxFunction, f_plus: &FluxFunction, u_l: f64, u_minus: f64, u_plus: f64, u_r: f64, n_env: usize) -> Result<Self> {
        let s = [u_l, u_minus, u_plus, u_r];
        let up = s.windows(2).all(|w| w[0] <= w[1]);
        let down = s.windows(2).all(|w| w[0] >= w[1]);
        if !(up || down) {
            return arg(format!("states {s:?} are not monotone"));
        }
        let left_fan = solve_half(f_minus, u_l, u_minus, Side::Left, n_env)?;
        let right_fan = solve_half(f_plus, u_r, u_plus, Side::Right, n_env)?;
        Ok(CrdSolution { left_fan, right_fan, u_minus, u_plus, intermediate: None, layer: None, m: horizon_m(f_minus, f_plus, u_l, u_r) })
    }

    /// Left wave, constant `ū` across the interface, right wave.
    pub fn double_wave(f_minus: &FluxFunction, f_plus: &FluxFunction, u_l: f64, ubar: f64, u_r: f64, n_env: usize) -> Result<Self> {
        let mut s = Self::new(f_minus, f_plus, u_l, ubar, ubar, u_r, n_env)?;
        s.intermediate = Some(ubar);
        Ok(s)
    }

    pub fn u_l(&self) -> f64 {
        self.left_fan.boundary_state
    }

    pub fn u_r(&self) -> f64 {
        self.right_fan.boundary_state
    }

    pub fn f_minus(&self) -> &FluxFunction {
        &self.left_fan.flux
    }

    pub fn f_plus(&self) -> &FluxFunction {
        &self.right_fan.flux
    }

    /// Closed ξ-intervals where `u` varies: wave supports, plus the
    /// interface when the traces differ.
    pub fn support(&self) -> Vec<(f64, f64)> {
        let mut s = self.left_fan.supports();
        if self.u_minus != self.u_plus {
            s.push((0.0, 0.0));
        }
        s.extend(self.right_fan.supports());
        merge_intervals(s, 0.0)
    }

    /// `u(ξ)` over the whole line; the interface returns `u₋`.
    pub fn eval(&self, xi: f64) -> f64 {
        let fan = if xi <= 0.0 { &self.left_fan } else { &self.right_fan };
        eval_fan_limit(fan, xi, if xi == 0.0 { Limit::FromBelow } else { Limit::FromAbove }).unwrap_or(f64::NAN)
    }
}

/// `1.05 · sup (|f₋'| + |f₊'|)` over the data interval on a dense grid.
pub fn horizon_m(f_minus: &FluxFunction, f_plus: &FluxFunction, u_l: f64, u_r: f64) -> f64 {
    let (a, b) = (u_l.min(u_r), u_l.max(u_r));
    let n = if a == b { 0 } else { HORIZON_SAMPLES - 1 };
    let sup = (0..=n)
        .map(|i| {
            let u = if n == 0 { a } else { lerp(a, b, i, n) };
            f_minus.slope(u).abs() + f_plus.slope(u).abs()
        })
        .fold(0.0_f64, f64::max);
    HORIZON_SAFETY * sup
}

/// One smooth piece of `h`. With `char_speed = Some(s)` the solution is
/// constant on the piece and `h' = ξ − s`; with `None` the piece lies in a
/// rarefaction and `h` is flat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPiece {
    pub a: f64,
    pub b: f64,
    pub h_a: f64,
    pub char_speed: Option<f64>,
}

impl HPiece {
    fn eval(&self, xi: f64) -> f64 {
        match self.char_speed {
            Some(s) => self.h_a + 0.5 * (xi - self.a) * (xi + self.a) - s * (xi - self.a),
            None => self.h_a,
        }
    }

    fn increment(a: f64, b: f64, s: Option<f64>) -> f64 {
        s.map_or(0.0, |s| 0.5 * (b - a) * (b + a) - s * (b - a))
    }

    fn min(&self) -> f64 {
        let mut m = self.eval(self.a).min(self.eval(self.b));
        if let Some(s) = self.char_speed {
            if s > self.a && s < self.b {
                m = m.min(self.eval(s));
            }
        }
        m
    }

    /// Sub-interval where `h ≤ level`.
    fn sublevel(&self, level: f64) -> Option<(f64, f64)> {
        match self.char_speed {
            None => (self.h_a <= level).then_some((self.a, self.b)),
            Some(s) => {
                // h = ½(ξ − s)² + k on the piece.
                let k = self.eval(s) - 0.0;
                let r2 = 2.0 * (level - k);
                if r2 < 0.0 {
                    return None;
                }
                let r = r2.sqrt();
                let (lo, hi) = ((s - r).max(self.a), (s + r).min(self.b));
                (lo <= hi).then_some((lo, hi))
            }
        }
    }
}

/// Closed-form piecewise representation of `h` on `[−M, M]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HFunction {
    pub m: f64,
    /// Pieces sorted by ξ; those with `b ≤ 0` form the left half-line.
    pub pieces: Vec<HPiece>,
}

impl HFunction {
    pub fn from_solution(sol: &CrdSolution) -> Self {
        let m = sol.m.max(sol.left_fan.speed_bounds.0.abs()).max(sol.right_fan.speed_bounds.1.abs());
        let fm = sol.f_minus();
        let fp = sol.f_plus();

        let mut right = Vec::new();
        let (mut x, mut h, mut state) = (0.0_f64, 0.0_f64, sol.u_plus);
        let mut push_right = |a: f64, b: f64, s: Option<f64>, h: &mut f64| {
            if b > a {
                right.push(HPiece { a, b, h_a: *h, char_speed: s });
                *h += HPiece::increment(a, b, s);
            }
        };
        for w in sol.right_fan.waves.iter().filter(|w| w.is_wave()) {
            push_right(x, w.speed_lo, Some(fp.slope(state)), &mut h);
            if w.kind == WaveKind::Rarefaction {
                push_right(w.speed_lo, w.speed_hi, None, &mut h);
            }
            state = w.u_right;
            x = w.speed_hi.max(x);
        }
        push_right(x, m, Some(fp.slope(state)), &mut h);

        let mut left = Vec::new();
        let (mut x, mut h, mut state) = (0.0_f64, 0.0_f64, sol.u_minus);
        let mut push_left = |a: f64, b: f64, s: Option<f64>, h: &mut f64| {
            if b > a {
                let h_a = *h - HPiece::increment(a, b, s);
                left.push(HPiece { a, b, h_a, char_speed: s });
                *h = h_a;
            }
        };
        for w in sol.left_fan.waves.iter().rev().filter(|w| w.is_wave()) {
            push_left(w.speed_hi, x, Some(fm.slope(state)), &mut h);
            if w.kind == WaveKind::Rarefaction {
                push_left(w.speed_lo, w.speed_hi, None, &mut h);
            }
            state = w.u_left;
            x = w.speed_lo.min(x);
        }
        push_left(-m, x, Some(fm.slope(state)), &mut h);

        left.reverse();
        left.extend(right);
        HFunction { m, pieces: left }
    }

    fn piece_at(&self, xi: f64) -> Option<&HPiece> {
        let side_left = xi < 0.0;
        self.pieces.iter().filter(|p| (p.b <= 0.0) == side_left).find(|p| xi >= p.a && xi <= p.b)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            return 0.0;
        }
        self.piece_at(xi).map_or(f64::NAN, |p| p.eval(xi))
    }

    /// `h'` away from kinks (right derivative at a kink).
    pub fn derivative(&self, xi: f64) -> f64 {
        self.piece_at(xi).map_or(f64::NAN, |p| p.char_speed.map_or(0.0, |s| xi - s))
    }

    /// `min_{ξ ≤ 0} h`.
    pub fn left_min(&self) -> f64 {
        self.pieces.iter().filter(|p| p.b <= 0.0).map(HPiece::min).fold(0.0, f64::min)
    }

    /// `min_{ξ ≥ 0} h`.
    pub fn right_min(&self) -> f64 {
        self.pieces.iter().filter(|p| p.a >= 0.0).map(HPiece::min).fold(0.0, f64::min)
    }

    /// `{ξ : h(ξ) ≤ min h + tol}` as merged closed intervals.
    pub fn argmin(&self, tol: f64) -> Vec<(f64, f64)> {
        let level = self.left_min().min(self.right_min()) + tol;
        let mut out: Vec<(f64, f64)> = self.pieces.iter().filter_map(|p| p.sublevel(level)).collect();
        if level >= 0.0 {
            out.push((0.0, 0.0));
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        merge_intervals(out, 1e-12 * (1.0 + self.m))
    }

    /// Piece boundaries, including 0.
    pub fn kinks(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.pieces.iter().flat_map(|p| [p.a, p.b]).collect();
        k.push(0.0);
        k
    }
}

fn merge_intervals(mut v: Vec<(f64, f64)>, gap: f64) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 + gap => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Hausdorff distance between two finite unions of closed intervals.
/// Infinite when exactly one of them is empty.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    one_sided(a, b).max(one_sided(b, a))
}

fn one_sided(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let dist = |x: f64| {
        b.iter()
            .map(|&(lo, hi)| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst = 0.0_f64;
    for &(lo, hi) in a {
        worst = worst.max(dist(lo)).max(dist(hi));
        // The farthest point may sit in the middle of a gap of `b`.
        for w in b.windows(2) {
            let mid = 0.5 * (w[0].1 + w[1].0);
            if mid > lo && mid < hi {
                worst = worst.max(dist(mid));
            }
        }
    }
    worst
}

/// Sampled and closed-form representation of `h` for one solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HProfile {
    pub m: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub left_min: f64,
    pub right_min: f64,
    pub argmin_set: Vec<(f64, f64)>,
    /// Largest gap between the quadrature of the integrand and the closed form.
    pub quadrature_discrepancy: f64,
    pub function: HFunction,
}

/// Builds `h` on `n` uniform samples of `[−M, M]` plus every kink, by closed
/// form, and cross-checks it against a trapezoid quadrature of the integrand
/// evaluated from the fans.
pub fn build_h(sol: &CrdSolution, n: usize) -> Result<HProfile> {
    if n < 16 {
        return arg("build_h needs n >= 16");
    }
    let func = HFunction::from_solution(sol);
    let m = func.m;
    if !(m > 0.0) {
        return arg("horizon M must be positive");
    }
    let mut grid: Vec<f64> = (0..n).map(|i| lerp(-m, m, i, n - 1)).collect();
    grid.extend(func.kinks());
    grid.retain(|x| x.abs() <= m);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values: Vec<f64> = grid.iter().map(|&x| func.eval(x)).collect();

    let integrand = |s: f64, lim: Limit| -> f64 {
        let left = s < 0.0 || (s == 0.0 && lim == Limit::FromBelow);
        let (fan, f) = if left { (&sol.left_fan, sol.f_minus()) } else { (&sol.right_fan, sol.f_plus()) };
        let u = eval_fan_limit(fan, s, lim).unwrap_or(f64::NAN);
        s - f.slope(u)
    };
    let zero = grid.iter().position(|&x| x == 0.0).expect("0 is a kink");
    let mut discrepancy = 0.0_f64;
    let mut q = 0.0;
    for i in zero..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        q += 0.5 * (b - a) * (integrand(a, Limit::FromAbove) + integrand(b, Limit::FromBelow));
        discrepancy = discrepancy.max((q - values[i + 1]).abs());
    }
    q = 0.0;
    for i in (1..=zero).rev() {
        let (a, b) = (grid[i - 1], grid[i]);
        q -= 0.5 * (b - a) * (integrand(a, Limit::FromAbove) + integrand(b, Limit::FromBelow));
        discrepancy = discrepancy.max((q - values[i - 1]).abs());
    }
    let tol = TOL_H * (1.0 + m * m);
    if !(discrepancy <= tol) {
        return Err(Error::Consistency(format!("quadrature and closed form of h differ by {discrepancy:e} (tolerance {tol:e})")));
    }
    let (left_min, right_min) = (func.left_min(), func.right_min());
    let tol_argmin = TOL_ARGMIN * (1.0 + left_min.min(right_min).abs());
    Ok(HProfile {
        m,
        grid,
        values,
        left_min,
        right_min,
        argmin_set: func.argmin(tol_argmin),
        quadrature_discrepancy: discrepancy,
        function: func,
    })
}

/// Outcome of the selection test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionVerdict {
    pub pass: bool,
    pub left_min: f64,
    pub right_min: f64,
    /// `|left_min − right_min|`, reported when both half-lines carry waves.
    pub balance: Option<f64>,
    /// Hausdorff distance between the argmin set and the support of `u'`.
    pub support_distance: f64,
    pub tol_sel: f64,
    pub tol_support: f64,
    pub violations: Vec<String>,
}

/// Balanced half-line minima when both sides carry waves, and argmin set
/// equal to the support of `u'`.
///
/// Supports are compared by Hausdorff distance. The argmin band of width
/// `tol_argmin` in `h` becomes a band of width `√(2 tol_argmin)` in ξ where
/// `h` touches its minimum tangentially, so the support tolerance is
/// `2√(2 tol_argmin)`.
pub fn check_selection(hp: &HProfile, sol: &CrdSolution) -> SelectionVerdict {
    let (lm, rm) = (hp.left_min, hp.right_min);
    let tol_sel = TOL_SEL * (1.0 + lm.abs().max(rm.abs()));
    let tol_argmin = TOL_ARGMIN * (1.0 + lm.min(rm).abs());
    let tol_support = 2.0 * (2.0 * tol_argmin).sqrt();
    let mut violations = Vec::new();

    let both = sol.left_fan.has_interior_waves() && sol.right_fan.has_interior_waves();
    let balance = both.then(|| (lm - rm).abs());
    if let Some(b) = balance {
        if b > tol_sel {
            violations.push(format!("half-line minima differ by {b:e}"));
        }
    }
    let support = sol.support();
    let support_distance = if support.is_empty() { 0.0 } else { hausdorff(&hp.argmin_set, &support) };
    if support_distance > tol_support {
        violations.push(format!("argmin set is {support_distance:e} away from the support of u'"));
    }
    SelectionVerdict {
        pass: violations.is_empty(),
        left_min: lm,
        right_min: rm,
        balance,
        support_distance,
        tol_sel,
        tol_support,
        violations,
    }
}

/// Outcome of the three trace clauses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceVerdict {
    pub pass: bool,
    pub clause_i: bool,
    pub clause_ii: bool,
    pub clause_iii: bool,
    pub slope_minus: f64,
    pub slope_plus: f64,
    pub violations: Vec<String>,
}

/// Sign conditions on `f₋'(u₋)`, `f₊'(u₊)` against the half-line supports:
/// (i) an outgoing trace speed forbids waves on that side, (ii) waves on both
/// sides need `f₋'(u₋) ≤ 0 ≤ f₊'(u₊)`, (iii) a jump at the interface next to
/// waves needs a sonic trace.
pub fn check_trace_conditions(sol: &CrdSolution) -> TraceVerdict {
    let dm = sol.f_minus().slope(sol.u_minus);
    let dp = sol.f_plus().slope(sol.u_plus);
    let tol = 1e-8 * (1.0 + sol.m);
    let left = sol.left_fan.has_interior_waves();
    let right = sol.right_fan.has_interior_waves();
    let mut violations = Vec::new();

    let mut clause_i = true;
    if dp < -tol && right {
        clause_i = false;
        violations.push(format!("f+'(u+) = {dp} < 0 with waves on the right"));
    }
    if dm > tol && left {
        clause_i = false;
        violations.push(format!("f-'(u-) = {dm} > 0 with waves on the left"));
    }
    let clause_ii = !(left && right) || (dm <= tol && dp >= -tol);
    if !clause_ii {
        violations.push(format!("waves on both sides need f-'(u-) <= 0 <= f+'(u+), got {dm}, {dp}"));
    }
    let mut clause_iii = true;
    if sol.u_minus != sol.u_plus {
        if right && dp.abs() > tol {
            clause_iii = false;
            violations.push(format!("interface jump with right waves needs f+'(u+) = 0, got {dp}"));
        }
        if left && dm.abs() > tol {
            clause_iii = false;
            violations.push(format!("interface jump with left waves needs f-'(u-) = 0, got {dm}"));
        }
    }
    TraceVerdict { pass: violations.is_empty(), clause_i, clause_ii, clause_iii, slope_minus: dm, slope_plus: dp, violations }
}

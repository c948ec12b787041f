//! Interfacial blow-up profiles `U(y)`, `V(y)` and the matching conditions
//! between their limits and the outer traces.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::flux::FluxFunction;
use crate::h_criterion::CrdSolution;
use crate::par::Execution;

pub const DEFAULT_Y: f64 = 12.0;
pub const DEFAULT_STEPS: usize = 4800;
pub const TOL_MATCH: f64 = 1e-6;
pub const MARGIN_FRACTION: f64 = 0.05;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// `V(y) = erf(y/√2)`.
pub fn v_limit(y: f64) -> f64 {
    libm::erf(y / SQRT_2)
}

/// `V'(y) = √(2/π) e^{−y²/2}`.
pub fn v_limit_prime(y: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * y * y).exp()
}

/// Sampled inner profile on `[−Y, Y]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerProfile {
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    /// `U'` carried by the integrator.
    pub du: Vec<f64>,
    pub v: Vec<f64>,
    /// Limits at `∓∞`; `None` when the orbit escapes the state window.
    pub u_minus_inf: Option<f64>,
    pub u_plus_inf: Option<f64>,
    pub nontrivial: bool,
    /// `false` when integration left the state window.
    pub bounded: bool,
}

impl LayerProfile {
    /// A profile known only through its limits (no samples).
    pub fn endpoints_only(u_minus_inf: f64, u_plus_inf: f64) -> Self {
        LayerProfile {
            y: Vec::new(),
            u: Vec::new(),
            du: Vec::new(),
            v: Vec::new(),
            u_minus_inf: Some(u_minus_inf),
            u_plus_inf: Some(u_plus_inf),
            nontrivial: u_minus_inf != u_plus_inf,
            bounded: true,
        }
    }

    /// The constant profile `U ≡ u0` on the default grid.
    pub fn constant(u0: f64, y_max: f64, steps: usize) -> Self {
        let y = symmetric_grid(y_max, steps);
        let v = y.iter().map(|&t| v_limit(t)).collect();
        LayerProfile {
            u: vec![u0; y.len()],
            du: vec![0.0; y.len()],
            v,
            y,
            u_minus_inf: Some(u0),
            u_plus_inf: Some(u0),
            nontrivial: false,
            bounded: true,
        }
    }
}

fn symmetric_grid(y_max: f64, steps: usize) -> Vec<f64> {
    let half = steps / 2;
    (0..=2 * half).map(|i| y_max * (i as f64 - half as f64) / half as f64).collect()
}

/// Coefficient `½((1 − V) f₋'(U) + (1 + V) f₊'(U))` of the profile ODE.
fn coefficient(f_minus: &FluxFunction, f_plus: &FluxFunction, v: f64, u: f64) -> f64 {
    0.5 * ((1.0 - v) * f_minus.slope(u) + (1.0 + v) * f_plus.slope(u))
}

/// Integrates `U'' = a(y, U) U'` from `y = 0` towards `sign(h)` with RK4.
/// Returns the states (including the start) and whether the window held.
fn integrate_half(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u0: f64,
    du0: f64,
    h: f64,
    steps: usize,
    window: (f64, f64),
) -> (Vec<(f64, f64)>, bool) {
    let rhs = |y: f64, u: f64, p: f64| (p, coefficient(f_minus, f_plus, v_limit(y), u) * p);
    let mut out = Vec::with_capacity(steps + 1);
    let (mut u, mut p) = (u0, du0);
    out.push((u, p));
    for k in 0..steps {
        let y = k as f64 * h;
        let (k1u, k1p) = rhs(y, u, p);
        let (k2u, k2p) = rhs(y + 0.5 * h, u + 0.5 * h * k1u, p + 0.5 * h * k1p);
        let (k3u, k3p) = rhs(y + 0.5 * h, u + 0.5 * h * k2u, p + 0.5 * h * k2p);
        let (k4u, k4p) = rhs(y + h, u + h * k3u, p + h * k3p);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !(u >= window.0 && u <= window.1) || !p.is_finite() {
            return (out, false);
        }
        out.push((u, p));
    }
    (out, true)
}

/// Limit of the orbit beyond the last sample, where `V = ±1` and the ODE
/// has the first integral `U' = f(U) − f(U_∞)`. The limit is the first zero
/// of `g(w) = f(w) − f(U) + U'` met in the direction of motion, including
/// tangential zeros (sonic limits); `None` when the orbit leaves the window.
fn extrapolate(f: &FluxFunction, u: f64, du: f64, direction: f64, window: (f64, f64)) -> Option<f64> {
    if du == 0.0 {
        return Some(u);
    }
    let level = f.value(u) - du;
    // Positive along the orbit until the limit.
    let s = du.signum();
    let g = |w: f64| s * (f.value(w) - level);
    let end = if direction > 0.0 { window.1 } else { window.0 };
    if (end - u) * direction <= 0.0 {
        return None;
    }
    let tol = 1e-15 * (1.0 + level.abs());
    let n = 2000;
    let x = |i: usize| u + (end - u) * (i as f64 / n as f64);
    let mut prev = (x(0), g(x(0)));
    let mut before: Option<(f64, f64)> = None;
    for i in 1..=n {
        let cur = (x(i), g(x(i)));
        if cur.1 <= 0.0 {
            return Some(crate::flux::bisect(prev.0, cur.0, 1e-15, g));
        }
        if let Some(b) = before {
            if prev.1 < b.1 && prev.1 <= cur.1 {
                let (w, gw) = golden_min(&g, b.0, cur.0);
                if gw <= tol {
                    return Some(if gw < 0.0 { crate::flux::bisect(b.0, w, 1e-15, g) } else { w });
                }
            }
        }
        before = Some(prev);
        prev = cur;
    }
    None
}

/// Minimum of a unimodal `g` on the segment between `a` and `b`.
fn golden_min(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if gc <= 0.0 {
            return (c, gc);
        }
        if gd <= 0.0 {
            return (d, gd);
        }
        if (b - a).abs() < 1e-16 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc < gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Profile from `U(0) = u0`, `U'(0) = du0` on `[−Y, Y]` with `steps`
/// RK4 steps in total. Integration stops early (and `bounded` is false) when
/// `U` leaves `window`.
pub fn integrate_profile(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    u0: f64,
    du0: f64,
    y_max: f64,
    steps: usize,
    window: (f64, f64),
) -> Result<LayerProfile> {
    if !(y_max > 0.0) || steps < 128 {
        return arg("profile integration needs Y > 0 and at least 128 steps");
    }
    let half = steps / 2;
    let h = y_max / half as f64;
    if !(h > f64::EPSILON * y_max) {
        return Err(crate::Error::Numerical("step size underflow".into()));
    }
    let (fwd, ok_f) = integrate_half(f_minus, f_plus, u0, du0, h, half, window);
    let (bwd, ok_b) = integrate_half(f_minus, f_plus, u0, du0, -h, half, window);

    let mut y = Vec::with_capacity(fwd.len() + bwd.len());
    let mut u = Vec::with_capacity(y.capacity());
    let mut du = Vec::with_capacity(y.capacity());
    for (k, &(a, b)) in bwd.iter().enumerate().skip(1).rev() {
        y.push(-(k as f64) * h);
        u.push(a);
        du.push(b);
    }
    for (k, &(a, b)) in fwd.iter().enumerate() {
        y.push(k as f64 * h);
        u.push(a);
        du.push(b);
    }
    let v = y.iter().map(|&t| v_limit(t)).collect();
    let (ul, pl) = bwd[bwd.len() - 1];
    let (ur, pr) = fwd[fwd.len() - 1];
    let u_minus_inf = if ok_b { extrapolate(f_minus, ul, pl, -pl.signum(), window) } else { None };
    let u_plus_inf = if ok_f { extrapolate(f_plus, ur, pr, pr.signum(), window) } else { None };
    Ok(LayerProfile {
        y,
        u,
        du,
        v,
        u_minus_inf,
        u_plus_inf,
        nontrivial: du0 != 0.0,
        bounded: ok_f && ok_b && u_minus_inf.is_some() && u_plus_inf.is_some(),
    })
}

/// Knobs of [`shoot_connect_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub y_max: f64,
    pub steps: usize,
    pub tol_match: f64,
    /// Interior samples of `U(0)` scanned for a bracket.
    pub scan: usize,
    /// State window; defaults to the targets widened by `MARGIN_FRACTION`.
    pub window: Option<(f64, f64)>,
    pub execution: Execution,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            y_max: DEFAULT_Y,
            steps: DEFAULT_STEPS,
            tol_match: TOL_MATCH,
            scan: 24,
            window: None,
            execution: Execution::default(),
        }
    }
}

/// [`shoot_connect_with`] with default knobs.
pub fn shoot_connect(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    target_minus: f64,
    target_plus: f64,
    y_max: f64,
) -> Option<LayerProfile> {
    shoot_connect_with(f_minus, f_plus, target_minus, target_plus, &ShootOptions { y_max, ..ShootOptions::default() })
}

/// Searches a bounded profile with `U(−∞) = target_minus`,
/// `U(+∞) = target_plus`.
///
/// For a trial `U(0)`, the slope `U'(0)` is bisected until the backward
/// limit hits `target_minus`; `U(0)` is then scanned and bisected until the
/// forward limit hits `target_plus`. Returns `None` when no bracket exists
/// or the final limits miss the targets by more than `tol_match`.
pub fn shoot_connect_with(
    f_minus: &FluxFunction,
    f_plus: &FluxFunction,
    target_minus: f64,
    target_plus: f64,
    opts: &ShootOptions,
) -> Option<LayerProfile> {
    if target_minus == target_plus {
        return Some(LayerProfile::constant(target_minus, opts.y_max, opts.steps));
    }
    let s = (target_plus - target_minus).signum();
    let width = (target_plus - target_minus).abs();
    let window = opts
        .window
        .unwrap_or((target_minus.min(target_plus) - MARGIN_FRACTION * width, target_minus.max(target_plus) + MARGIN_FRACTION * width));
    let half = opts.steps / 2;
    let h = opts.y_max / half as f64;

    // Backward limit of the orbit from (u0, d); None on escape.
    let back = |u0: f64, d: f64| -> Option<f64> {
        let (b, ok) = integrate_half(f_minus, f_plus, u0, d, -h, half, window);
        let (u, p) = *b.last().unwrap();
        if ok {
            extrapolate(f_minus, u, p, -p.signum(), window)
        } else {
            None
        }
    };
    let fwd = |u0: f64, d: f64| -> Option<f64> {
        let (b, ok) = integrate_half(f_minus, f_plus, u0, d, h, half, window);
        let (u, p) = *b.last().unwrap();
        if ok {
            extrapolate(f_plus, u, p, p.signum(), window)
        } else {
            None
        }
    };
    // Slope at 0 whose backward limit is target_minus.
    let slope_for = |u0: f64| -> Option<f64> {
        let want = s * (u0 - target_minus);
        let reach = |d: f64| back(u0, s * d).map_or(f64::INFINITY, |um| s * (u0 - um));
        let mut hi = 1e-3 * width;
        let mut grow = 0;
        while reach(hi) < want {
            hi *= 2.0;
            grow += 1;
            if grow > 60 {
                return None;
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if reach(mid) < want {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(s * 0.5 * (lo + hi))
    };
    // Signed miss of the forward limit; escape counts as overshoot.
    let miss = |u0: f64| -> Option<(f64, f64)> {
        let d = slope_for(u0)?;
        let r = fwd(u0, d).map_or(f64::INFINITY, |up| s * (up - target_plus));
        Some((r, d))
    };

    let n = opts.scan.max(2);
    let xs: Vec<f64> = (1..=n).map(|i| target_minus + (target_plus - target_minus) * i as f64 / (n + 1) as f64).collect();
    let ms = opts.execution.map_slice(&xs, |&u0| miss(u0));
    let bracket = (0..n - 1).find_map(|i| match (ms[i], ms[i + 1]) {
        (Some((a, _)), Some((b, _))) if (a < 0.0) != (b < 0.0) => Some((xs[i], xs[i + 1], a)),
        _ => None,
    })?;
    let (mut lo, mut hi, mut r_lo) = bracket;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (r, _) = miss(mid)?;
        if (r < 0.0) == (r_lo < 0.0) {
            lo = mid;
            r_lo = r;
        } else {
            hi = mid;
        }
    }
    // Keep the side that stays bounded.
    let candidates = [lo, hi];
    for u0 in candidates {
        let Some((_, d)) = miss(u0) else { continue };
        let Ok(p) = integrate_profile(f_minus, f_plus, u0, d, opts.y_max, opts.steps, window) else {
            continue;
        };
        if let (Some(a), Some(b)) = (p.u_minus_inf, p.u_plus_inf) {
            if (a - target_minus).abs() <= opts.tol_match && (b - target_plus).abs() <= opts.tol_match {
                return Some(p);
            }
        }
    }
    None
}

/// Largest `|U'' − a U'|` over interior nodes, with fourth-order central
/// differences of the samples.
pub fn ode_residual(profile: &LayerProfile, f_minus: &FluxFunction, f_plus: &FluxFunction) -> f64 {
    let (y, u) = (&profile.y, &profile.u);
    if y.len() < 5 {
        return 0.0;
    }
    let h = y[1] - y[0];
    (2..y.len() - 2)
        .map(|i| {
            // Written in differences so that constants give exact zeros.
            let d = |k: usize| u[k] - u[i];
            let d1 = (8.0 * (u[i + 1] - u[i - 1]) - (u[i + 2] - u[i - 2])) / (12.0 * h);
            let d2 = (16.0 * (d(i + 1) + d(i - 1)) - d(i + 2) - d(i - 2)) / (12.0 * h * h);
            (d2 - coefficient(f_minus, f_plus, profile.v[i], u[i]) * d1).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest deviation in the half-line flux relations
///
/// ```text
/// y > 0:  f₊(U₊∞) = G(y) + ½∫_y^∞ (f₊ − f₋)(U) V' ds − U'(y)
/// y < 0:  f₋(U₋∞) = G(y) − ½∫_{−∞}^y (f₊ − f₋)(U) V' ds − U'(y)
/// ```
///
/// with `G = ½((1 − V) f₋(U) + (1 + V) f₊(U))`, obtained by integrating the
/// profile ODE once. Tails beyond `±Y` are dropped (`V' < 10⁻³¹` there).
pub fn flux_relation_residual(profile: &LayerProfile, f_minus: &FluxFunction, f_plus: &FluxFunction) -> Option<f64> {
    let (a, b) = (profile.u_minus_inf?, profile.u_plus_inf?);
    let (y, u, v, du) = (&profile.y, &profile.u, &profile.v, &profile.du);
    let n = y.len();
    if n < 2 {
        return Some(0.0);
    }
    let w: Vec<f64> = (0..n).map(|i| (f_plus.value(u[i]) - f_minus.value(u[i])) * v_limit_prime(y[i])).collect();
    let g = |i: usize| 0.5 * ((1.0 - v[i]) * f_minus.value(u[i]) + (1.0 + v[i]) * f_plus.value(u[i]));
    let mut worst = 0.0_f64;
    let mut tail = 0.0;
    for i in (0..n).rev() {
        if i + 1 < n {
            tail += 0.5 * (y[i + 1] - y[i]) * (w[i] + w[i + 1]);
        }
        if y[i] > 0.0 {
            worst = worst.max((g(i) + 0.5 * tail - du[i] - f_plus.value(b)).abs());
        }
    }
    let mut head = 0.0;
    for i in 0..n {
        if i > 0 {
            head += 0.5 * (y[i] - y[i - 1]) * (w[i] + w[i - 1]);
        }
        if y[i] < 0.0 {
            worst = worst.max((g(i) - 0.5 * head - du[i] - f_minus.value(a)).abs());
        }
    }
    Some(worst)
}

/// Whether a nontrivial layer from `a` to `b` can balance fluxes:
/// integrating the ODE over the line gives
/// `f₊(b) − f₋(a) = ½∫(f₊ − f₋)(U) V' dy`, an average of `f₊ − f₋` over
/// states strictly between `a` and `b`.
pub fn layer_flux_balance_ok(f_minus: &FluxFunction, f_plus: &FluxFunction, a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    let target = f_plus.value(b) - f_minus.value(a);
    let n = 2048;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 1..n {
        let w = a + (b - a) * i as f64 / n as f64;
        let d = f_plus.value(w) - f_minus.value(w);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    target > lo && target < hi
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticVerdict {
    pub pass: bool,
    /// `∫₀^Y f₊'(U)` and `∫_{−Y}^0 f₋'(U)`.
    pub right_integral: f64,
    pub left_integral: f64,
    /// Average integrand over the outer third of each half-line.
    pub right_tail_slope: f64,
    pub left_tail_slope: f64,
    /// `f₊'(U₊∞)` and `f₋'(U₋∞)`, the asymptotic slopes.
    pub right_velocity: f64,
    pub left_velocity: f64,
}

/// Running integrals of `f₊'(U)` on `y > 0` and `f₋'(U)` on `y < 0`: the
/// first must decrease without bound, the second increase. A trivial
/// profile passes vacuously.
pub fn check_asymptotic_conditions(profile: &LayerProfile, f_minus: &FluxFunction, f_plus: &FluxFunction) -> AsymptoticVerdict {
    let rv = profile.u_plus_inf.map_or(f64::NAN, |b| f_plus.slope(b));
    let lv = profile.u_minus_inf.map_or(f64::NAN, |a| f_minus.slope(a));
    if !profile.nontrivial || profile.y.len() < 3 {
        return AsymptoticVerdict {
            pass: true,
            right_integral: 0.0,
            left_integral: 0.0,
            right_tail_slope: 0.0,
            left_tail_slope: 0.0,
            right_velocity: rv,
            left_velocity: lv,
        };
    }
    let y = &profile.y;
    let n = y.len();
    let zero = y.iter().position(|&t| t == 0.0).unwrap_or(n / 2);
    let ymax = y[n - 1];
    let ymin = y[0];
    let mut right = 0.0;
    let mut right_at_two_thirds = 0.0;
    for i in zero + 1..n {
        right += 0.5 * (y[i] - y[i - 1]) * (f_plus.slope(profile.u[i]) + f_plus.slope(profile.u[i - 1]));
        if y[i] <= 2.0 * ymax / 3.0 {
            right_at_two_thirds = right;
        }
    }
    let mut left = 0.0;
    let mut left_at_two_thirds = 0.0;
    for i in (0..zero).rev() {
        left += 0.5 * (y[i + 1] - y[i]) * (f_minus.slope(profile.u[i]) + f_minus.slope(profile.u[i + 1]));
        if y[i] >= 2.0 * ymin / 3.0 {
            left_at_two_thirds = left;
        }
    }
    let right_tail_slope = (right - right_at_two_thirds) / (ymax / 3.0);
    let left_tail_slope = (left - left_at_two_thirds) / (-ymin / 3.0);
    let pass = profile.bounded && right < 0.0 && left > 0.0 && right_tail_slope <= 1e-9 && left_tail_slope >= -1e-9;
    AsymptoticVerdict {
        pass,
        right_integral: right,
        left_integral: left,
        right_tail_slope,
        left_tail_slope,
        right_velocity: rv,
        left_velocity: lv,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingVerdict {
    pub pass: bool,
    /// `|f₊(U₊∞) − f₊(u₊)|`, `|f₋(u₋) − f₋(U₋∞)|`.
    pub flux_plus_residual: f64,
    pub flux_minus_residual: f64,
    pub monot_right: bool,
    pub monot_left: bool,
    /// Largest sampled violation of the right and left Oleinik pairs.
    pub oleinik_right: f64,
    pub oleinik_left: f64,
    /// Largest sampled violation of the Kruzkov inequalities `|u − k|`.
    pub kruzkov_right: f64,
    pub kruzkov_left: f64,
    /// Sign conditions at a standing shock; `None` when the endpoints match.
    pub standing_right: Option<bool>,
    pub standing_left: Option<bool>,
    /// Endpoint order and velocity signs; `None` for a trivial layer.
    pub nontrivial_ok: Option<bool>,
    pub violations: Vec<String>,
}

/// Interior sample `k` of the segment between `a` and `b`.
fn samples(a: f64, b: f64, k: usize) -> impl Iterator<Item = f64> {
    (1..=k).map(move |j| a + (b - a) * j as f64 / (k + 1) as f64)
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kruzkov entropy flux `sgn(u − k)(f(u) − f(k))`.
fn q(f: &FluxFunction, u: f64, k: f64) -> f64 {
    sgn(u - k) * (f.value(u) - f.value(k))
}

/// Matching between the outer traces of `sol` and the limits of `profile`:
/// flux equalities, ordering, Oleinik and Kruzkov inequalities on the
/// standing-shock intervals, sign conditions, and the nontrivial-layer
/// conditions.
pub fn check_matching(sol: &CrdSolution, profile: &LayerProfile, k_samples: usize) -> MatchingVerdict {
    let (fm, fp) = (sol.f_minus(), sol.f_plus());
    let (um, up) = (sol.u_minus, sol.u_plus);
    let dir = sol.u_r() - sol.u_l();
    let mut violations = Vec::new();
    let (Some(a), Some(b)) = (profile.u_minus_inf, profile.u_plus_inf) else {
        return MatchingVerdict {
            pass: false,
            flux_plus_residual: f64::NAN,
            flux_minus_residual: f64::NAN,
            monot_right: false,
            monot_left: false,
            oleinik_right: f64::NAN,
            oleinik_left: f64::NAN,
            kruzkov_right: f64::NAN,
            kruzkov_left: f64::NAN,
            standing_right: None,
            standing_left: None,
            nontrivial_ok: None,
            violations: vec!["profile has no limits".into()],
        };
    };
    let lo = sol.u_l().min(sol.u_r());
    let hi = sol.u_l().max(sol.u_r());
    let scale = fm.value_scale(lo, hi).max(fp.value_scale(lo, hi));
    let tol = 1e-8 * scale;
    let slope_tol = 1e-8 * (1.0 + sol.m);

    let flux_plus_residual = (fp.value(b) - fp.value(up)).abs();
    let flux_minus_residual = (fm.value(um) - fm.value(a)).abs();
    if flux_plus_residual > tol {
        violations.push(format!("f+(U+inf) - f+(u+) = {flux_plus_residual:e}"));
    }
    if flux_minus_residual > tol {
        violations.push(format!("f-(u-) - f-(U-inf) = {flux_minus_residual:e}"));
    }
    let monot_right = dir * (up - b) >= -tol;
    let monot_left = dir * (a - um) >= -tol;
    if !monot_right {
        violations.push("(uR - uL)(u+ - U+inf) < 0".into());
    }
    if !monot_left {
        violations.push("(uR - uL)(U-inf - u-) < 0".into());
    }

    let mut oleinik_right = 0.0_f64;
    let mut kruzkov_right = 0.0_f64;
    for k in samples(b, up, k_samples) {
        oleinik_right = oleinik_right.max(q(fp, up, k)).max(-q(fp, b, k));
        kruzkov_right = kruzkov_right.max(q(fp, up, k) - q(fp, b, k));
    }
    let mut oleinik_left = 0.0_f64;
    let mut kruzkov_left = 0.0_f64;
    for k in samples(um, a, k_samples) {
        oleinik_left = oleinik_left.max(-q(fm, um, k)).max(q(fm, a, k));
        kruzkov_left = kruzkov_left.max(q(fm, a, k) - q(fm, um, k));
    }
    if oleinik_right > tol || kruzkov_right > tol {
        violations.push(format!("right standing shock entropy violation {:e}", oleinik_right.max(kruzkov_right)));
    }
    if oleinik_left > tol || kruzkov_left > tol {
        violations.push(format!("left standing shock entropy violation {:e}", oleinik_left.max(kruzkov_left)));
    }

    let standing_right = (b != up).then(|| fp.slope(b) >= -slope_tol && fp.slope(up) <= slope_tol);
    let standing_left = (a != um).then(|| fm.slope(um) >= -slope_tol && fm.slope(a) <= slope_tol);
    if standing_right == Some(false) {
        violations.push("right standing shock needs f+'(U+inf) >= 0 >= f+'(u+)".into());
    }
    if standing_left == Some(false) {
        violations.push("left standing shock needs f-'(u-) >= 0 >= f-'(U-inf)".into());
    }
    let nontrivial_ok = profile.nontrivial.then(|| dir * (b - a) > 0.0 && fm.slope(a) >= -slope_tol && fp.slope(b) <= slope_tol);
    if nontrivial_ok == Some(false) {
        violations.push("nontrivial layer needs ordered endpoints, f-'(U-inf) >= 0 and f+'(U+inf) <= 0".into());
    }
    MatchingVerdict {
        pass: violations.is_empty(),
        flux_plus_residual,
        flux_minus_residual,
        monot_right,
        monot_left,
        oleinik_right,
        oleinik_left,
        kruzkov_right,
        kruzkov_left,
        standing_right,
        standing_left,
        nontrivial_ok,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_limit_values() {
        assert_eq!(v_limit(0.0), 0.0);
        assert!((1.0 - v_limit(8.0)) < 1e-14);
        for y in [0.5, 1.0, 2.0] {
            assert_eq!(v_limit(-y), -v_limit(y));
        }
    }

    #[test]
    fn zero_slope_gives_constant() {
        let f = FluxFunction::quadratic(0.0);
        let g = FluxFunction::quadratic(-1.0);
        let p = integrate_profile(&f, &g, 0.3, 0.0, 12.0, 4800, (-1.0, 1.0)).unwrap();
        assert!(!p.nontrivial);
        assert!(p.u.iter().all(|&u| u == 0.3));
        assert_eq!(p.u_plus_inf, Some(0.3));
        assert_eq!(p.y.len(), 4801);
    }
}

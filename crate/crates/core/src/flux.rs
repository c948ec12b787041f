//! Scalar flux functions and their discrete convex envelopes.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

/// Relative step of the central difference used for sampled fluxes.
pub const DIFF_STEP: f64 = 1e-6;
/// Deduplication tolerance for roots of `f'`.
pub const TOL_ROOT: f64 = 1e-10;
/// Default number of cells for envelope sampling.
pub const DEFAULT_ENVELOPE_GRID: usize = 4096;

const ROOT_SCAN_CELLS: usize = 4096;

/// A scalar flux `f(u)`.
///
/// Quadratic and polynomial fluxes are defined on the whole line. A sampled
/// flux is the piecewise-linear interpolant of its table and only accepts
/// states inside the table through [`FluxFunction::eval`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FluxFunction {
    /// `½(u − c)²`.
    Quadratic { c: f64 },
    /// `Σ coeffs[k] uᵏ`, ascending degree.
    Polynomial { coeffs: Vec<f64> },
    /// Linear interpolation of `values` over the strictly increasing `grid`.
    Sampled { grid: Vec<f64>, values: Vec<f64> },
}

impl FluxFunction {
    pub fn quadratic(c: f64) -> Self {
        FluxFunction::Quadratic { c }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        FluxFunction::Polynomial { coeffs }
    }

    /// Builds a sampled flux after checking the table.
    pub fn sampled(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = FluxFunction::Sampled { grid, values };
        f.validate()?;
        Ok(f)
    }

    /// Checks the structural requirements of the configuration.
    pub fn validate(&self) -> Result<()> {
        match self {
            FluxFunction::Quadratic { c } if !c.is_finite() => arg("quadratic offset must be finite"),
            FluxFunction::Polynomial { coeffs } if coeffs.iter().any(|c| !c.is_finite()) => arg("polynomial coefficients must be finite"),
            FluxFunction::Sampled { grid, values } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return arg("sampled flux needs at least two nodes and one value per node");
                }
                if grid.windows(2).any(|w| !(w[1] > w[0])) {
                    return arg("sampled flux grid must be strictly increasing");
                }
                if grid.iter().chain(values).any(|x| !x.is_finite()) {
                    return arg("sampled flux table must be finite");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The closed interval on which the flux is defined, if bounded.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            FluxFunction::Sampled { grid, .. } => Some((grid[0], grid[grid.len() - 1])),
            _ => None,
        }
    }

    /// Fails with a domain error when `[a, b]` is not inside the flux domain.
    pub fn check_interval(&self, a: f64, b: f64) -> Result<()> {
        if let Some((lo, hi)) = self.domain() {
            for u in [a, b] {
                if u < lo || u > hi || !u.is_finite() {
                    return Err(Error::Domain { u, lo, hi });
                }
            }
        }
        Ok(())
    }

    /// `f(u)`, with a domain check for sampled fluxes.
    pub fn eval(&self, u: f64) -> Result<f64> {
        self.check_interval(u, u)?;
        Ok(self.value(u))
    }

    /// `f'(u)`, with a domain check for sampled fluxes.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        self.check_interval(u, u)?;
        Ok(self.slope(u))
    }

    /// `f(u)` without domain check; sampled fluxes extrapolate linearly.
    pub fn value(&self, u: f64) -> f64 {
        match self {
            FluxFunction::Quadratic { c } => 0.5 * (u - c) * (u - c),
            FluxFunction::Polynomial { coeffs } => horner(coeffs.iter().rev().copied(), u),
            FluxFunction::Sampled { grid, values } => interp(grid, values, u),
        }
    }

    /// `f'(u)` without domain check.
    pub fn slope(&self, u: f64) -> f64 {
        match self {
            FluxFunction::Quadratic { c } => u - c,
            FluxFunction::Polynomial { coeffs } => horner(coeffs.iter().enumerate().skip(1).rev().map(|(k, c)| k as f64 * c), u),
            FluxFunction::Sampled { .. } => {
                let h = DIFF_STEP * u.abs().max(1.0);
                (self.value(u + h) - self.value(u - h)) / (2.0 * h)
            }
        }
    }

    /// `f''(u)`; finite difference of the slope for sampled fluxes.
    pub fn curvature(&self, u: f64) -> f64 {
        match self {
            FluxFunction::Quadratic { .. } => 1.0,
            FluxFunction::Polynomial { coeffs } => {
                horner(coeffs.iter().enumerate().skip(2).rev().map(|(k, c)| (k * (k - 1)) as f64 * c), u)
            }
            FluxFunction::Sampled { .. } => {
                let h = 1e-4 * u.abs().max(1.0);
                (self.slope(u + h) - self.slope(u - h)) / (2.0 * h)
            }
        }
    }

    /// Whether `f` is convex on `[a, b]`, tested on a dense grid.
    pub fn is_convex_on(&self, a: f64, b: f64) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        match self {
            FluxFunction::Quadratic { .. } => true,
            FluxFunction::Polynomial { .. } => {
                let n = 2048;
                (0..=n).all(|i| self.curvature(lerp(a, b, i, n)) >= -1e-12)
            }
            FluxFunction::Sampled { .. } => {
                let n = 2048;
                let s: Vec<f64> = (0..=n).map(|i| self.value(lerp(a, b, i, n))).collect();
                let scale = s.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
                s.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-12 * scale)
            }
        }
    }

    /// Largest `|f|` on a coarse sampling of `[a, b]`, at least 1. Used to
    /// scale absolute tolerances.
    pub fn value_scale(&self, a: f64, b: f64) -> f64 {
        (0..=64).fold(1.0_f64, |m, i| m.max(self.value(lerp(a, b, i, 64)).abs()))
    }
}

fn horner(coeffs_high_to_low: impl Iterator<Item = f64>, u: f64) -> f64 {
    coeffs_high_to_low.fold(0.0, |acc, c| acc * u + c)
}

fn interp(grid: &[f64], values: &[f64], u: f64) -> f64 {
    let n = grid.len();
    let i = match grid.partition_point(|&g| g <= u) {
        0 => 0,
        k if k >= n => n - 2,
        k => k - 1,
    };
    let t = (u - grid[i]) / (grid[i + 1] - grid[i]);
    values[i] + t * (values[i + 1] - values[i])
}

pub(crate) fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i == n {
        b
    } else {
        a + (b - a) * (i as f64 / n as f64)
    }
}

/// Bisection on a bracketing interval `[a, b]` of a continuous function.
/// Returns the midpoint of the final bracket.
pub(crate) fn bisect(mut a: f64, mut b: f64, tol: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut ga = g(a);
    if ga == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots of `f'` in `[a, b]`, ascending.
///
/// Sign changes of `f'` are located on a 4096-cell scan and refined by
/// bisection; exact zeros at scan nodes are kept as well.
pub fn sonic_points(f: &FluxFunction, a: f64, b: f64) -> Result<Vec<f64>> {
    if !(a < b) {
        return arg("sonic_points needs a < b");
    }
    f.check_interval(a, b)?;
    let n = ROOT_SCAN_CELLS;
    let xs: Vec<f64> = (0..=n).map(|i| lerp(a, b, i, n)).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| f.slope(x)).collect();
    let mut roots = Vec::new();
    for i in 0..=n {
        if ds[i] == 0.0 {
            roots.push(xs[i]);
        }
        if i < n && ds[i] != 0.0 && ds[i + 1] != 0.0 && (ds[i] < 0.0) != (ds[i + 1] < 0.0) {
            roots.push(bisect(xs[i], xs[i + 1], 1e-15, |u| f.slope(u)));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= TOL_ROOT);
    Ok(roots)
}

/// Number of sign changes of `f''` on `[a, b]` detected on a dense scan.
pub fn inflection_count(f: &FluxFunction, a: f64, b: f64) -> usize {
    let n = ROOT_SCAN_CELLS;
    let mut last = 0.0_f64;
    let mut count = 0;
    for i in 0..=n {
        let c = f.curvature(lerp(a, b, i, n));
        if c.abs() <= 1e-12 {
            continue;
        }
        if last != 0.0 && (c < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = c;
    }
    count
}

/// Which envelope of the flux a hull represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    LowerConvex,
    UpperConcave,
}

/// Piecewise-linear envelope of a flux sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub orientation: Orientation,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    /// One flag per segment: `true` when the segment joins adjacent samples.
    pub contact_flags: Vec<bool>,
}

impl Envelope {
    /// Slope of segment `i`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.breakpoints[i + 1] - self.breakpoints[i])
    }

    /// Piecewise-linear evaluation; clamps outside the breakpoints.
    pub fn eval(&self, u: f64) -> f64 {
        interp(&self.breakpoints, &self.values, u.clamp(self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1]))
    }
}

/// Lower convex envelope of `f` sampled on `n + 1` uniform points of `[a, b]`.
pub fn lower_convex_envelope(f: &FluxFunction, a: f64, b: f64, n: usize) -> Result<Envelope> {
    envelope(f, a, b, n, Orientation::LowerConvex)
}

/// Upper concave envelope of `f` sampled on `n + 1` uniform points of `[a, b]`.
pub fn upper_concave_envelope(f: &FluxFunction, a: f64, b: f64, n: usize) -> Result<Envelope> {
    envelope(f, a, b, n, Orientation::UpperConcave)
}

fn envelope(f: &FluxFunction, a: f64, b: f64, n: usize, orientation: Orientation) -> Result<Envelope> {
    if n < 2 {
        return arg("envelope grid needs n >= 2");
    }
    if !(a < b) {
        return arg("envelope interval needs a < b");
    }
    f.check_interval(a, b)?;
    let sign = match orientation {
        Orientation::LowerConvex => 1.0,
        Orientation::UpperConcave => -1.0,
    };
    let xs: Vec<f64> = (0..=n).map(|i| lerp(a, b, i, n)).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| sign * f.value(x)).collect();
    let hull = lower_hull(&xs, &ys);
    Ok(Envelope {
        orientation,
        breakpoints: hull.iter().map(|&i| xs[i]).collect(),
        values: hull.iter().map(|&i| sign * ys[i]).collect(),
        contact_flags: hull.windows(2).map(|w| w[1] - w[0] == 1).collect(),
    })
}

/// Andrew's monotone chain, lower part only. Points must be sorted by `x`.
/// Returns the indices of the hull vertices.
fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for p in 0..xs.len() {
        while hull.len() >= 2 {
            let (o, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (xs[q] - xs[o]) * (ys[p] - ys[o]) - (ys[q] - ys[o]) * (xs[p] - xs[o]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

//! Solution types over the `(u_L, u_R)` plane for the quadratic pair
//! `f₋ = u²/2`, `f₊ = (u − c)²/2`, with sonic points `0` and `c`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::double_wave::{quadratic_shock_constraints, quadratic_ubar_rarefaction, quadratic_ubar_shock};
use crate::error::{arg, Result};
use crate::flux::{lerp, FluxFunction};
use crate::h_criterion::{build_h, check_selection, check_trace_conditions, CrdSolution};
use crate::inner_layer::{check_matching, layer_flux_balance_ok, shoot_connect_with, LayerProfile, ShootOptions};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SolutionType {
    #[serde(rename = "R-")]
    RMinus,
    #[serde(rename = "R+")]
    RPlus,
    #[serde(rename = "R-R+")]
    RMinusRPlus,
    #[serde(rename = "S-")]
    SMinus,
    #[serde(rename = "S+")]
    SPlus,
    #[serde(rename = "S-S+")]
    SMinusSPlus,
    T,
    #[serde(rename = "TR+")]
    TRPlus,
    #[serde(rename = "R-T")]
    RMinusT,
    #[serde(rename = "R-TR+")]
    RMinusTRPlus,
}

use SolutionType::*;

impl SolutionType {
    pub const ALL: [SolutionType; 10] = [RMinus, RPlus, RMinusRPlus, SMinus, SPlus, SMinusSPlus, T, TRPlus, RMinusT, RMinusTRPlus];

    pub fn tag(self) -> &'static str {
        match self {
            RMinus => "R-",
            RPlus => "R+",
            RMinusRPlus => "R-R+",
            SMinus => "S-",
            SPlus => "S+",
            SMinusSPlus => "S-S+",
            T => "T",
            TRPlus => "TR+",
            RMinusT => "R-T",
            RMinusTRPlus => "R-TR+",
        }
    }

    pub fn has_layer(self) -> bool {
        matches!(self, T | TRPlus | RMinusT | RMinusTRPlus)
    }
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Area tables (letter → solution set) for `c > 0`.
pub const TABLE_POSITIVE: [(&str, &[SolutionType]); 10] = [
    ("A", &[RPlus]),
    ("B", &[TRPlus]),
    ("C", &[RMinusTRPlus]),
    ("D", &[RMinusT]),
    ("E", &[RMinus]),
    ("F", &[SMinus]),
    ("G", &[SMinus, T]),
    ("H", &[T]),
    ("I", &[SPlus, T]),
    ("J", &[SPlus]),
];

/// Area tables (letter → solution set) for `c < 0`.
pub const TABLE_NEGATIVE: [(&str, &[SolutionType]); 17] = [
    ("A", &[RPlus]),
    ("B", &[RMinusRPlus, RPlus]),
    ("C", &[RMinusRPlus]),
    ("D", &[RMinusRPlus, RMinus]),
    ("E", &[RMinus]),
    ("F", &[RMinus, RPlus]),
    ("G", &[RMinus, RPlus, RMinusRPlus]),
    ("H", &[RMinus, RPlus]),
    ("I", &[SMinus]),
    ("J", &[SMinus, T]),
    ("K", &[SMinus, SPlus, T]),
    ("L", &[SPlus, T]),
    ("M", &[SPlus]),
    ("N", &[SMinus, SPlus]),
    ("O", &[SMinus, SPlus, SMinusSPlus, T]),
    ("P", &[SMinus, SPlus]),
    ("Q", &[SMinus, SPlus, SMinusSPlus]),
];

/// Reference reverse table (type → areas) for `c < 0`.
pub const REVERSE_TABLE_NEGATIVE: [(SolutionType, &[&str]); 7] = [
    (RPlus, &["A", "B", "F", "G"]),
    (RMinus, &["E", "D", "G", "H"]),
    (RMinusRPlus, &["B", "C", "D", "H"]),
    (SMinus, &["I", "J", "K", "N", "O", "P", "Q"]),
    (SPlus, &["K", "L", "M", "N", "O", "P", "Q"]),
    (SMinusSPlus, &["O", "Q"]),
    (T, &["K", "O"]),
];

pub fn table(c: f64) -> &'static [(&'static str, &'static [SolutionType])] {
    if c > 0.0 {
        &TABLE_POSITIVE
    } else {
        &TABLE_NEGATIVE
    }
}

/// Candidate types from the convex-case necessary conditions: sonic-point
/// orderings, shock-speed signs and the double-shock bounds.
pub fn admissible_types(c: f64, u_l: f64, u_r: f64) -> BTreeSet<SolutionType> {
    let mut s = BTreeSet::new();
    if u_l == u_r {
        return s;
    }
    if u_l < u_r {
        if u_l >= c {
            s.insert(RPlus);
        }
        if u_r <= 0.0 {
            s.insert(RMinus);
        }
        if c < 0.0 {
            if u_l < 0.5 * c && 0.5 * c < u_r {
                s.insert(RMinusRPlus);
            }
        } else {
            let left_raref = u_l < 0.0;
            let right_raref = u_r > c;
            let layer = u_l < c && u_r > 0.0;
            match (layer, left_raref, right_raref) {
                (true, true, true) => s.insert(RMinusTRPlus),
                (true, true, false) => s.insert(RMinusT),
                (true, false, true) => s.insert(TRPlus),
                (true, false, false) => s.insert(T),
                _ => false,
            };
        }
    } else {
        if u_l + u_r < 0.0 {
            s.insert(SMinus);
        }
        if u_l + u_r > 2.0 * c {
            s.insert(SPlus);
        }
        if c < 0.0 && quadratic_shock_constraints(c, u_l, u_r) {
            s.insert(SMinusSPlus);
        }
        if u_l >= 0.0 && u_r <= c {
            s.insert(T);
        }
    }
    s
}

/// Letter of the reference table whose solution set matches; the two
/// pairs of areas sharing a set (`F`/`H`, `N`/`P`) are split by `u_L ≷ c/2`
/// and `u_R ≷ c`.
pub fn area_label(c: f64, u_l: f64, u_r: f64, set: &BTreeSet<SolutionType>) -> String {
    if u_l == u_r {
        return "constant".into();
    }
    let hits: Vec<&str> =
        table(c).iter().filter(|(_, types)| types.len() == set.len() && types.iter().all(|t| set.contains(t))).map(|(l, _)| *l).collect();
    match hits.as_slice() {
        [one] => (*one).into(),
        ["F", "H"] => if u_l > 0.5 * c { "F" } else { "H" }.into(),
        ["N", "P"] => if u_r > c { "N" } else { "P" }.into(),
        _ => "?".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: SolutionType,
    pub u_minus: f64,
    pub u_plus: f64,
    pub ubar: Option<f64>,
    /// Construction succeeded (fans fit their half-lines).
    pub constructed: bool,
    pub trace_pass: bool,
    pub selection_pass: bool,
    /// Matching of traces with the layer limits; `None` without a layer.
    pub matching_pass: Option<bool>,
    /// Flux balance of a nontrivial layer between the traces.
    pub layer_balance_ok: Option<bool>,
    /// Shooting result when requested.
    pub layer_found: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub point: (f64, f64),
    pub area_label: String,
    pub solutions: BTreeSet<SolutionType>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub envelope_n: usize,
    pub h_grid: usize,
    pub k_samples: usize,
    /// Build and check witnesses (otherwise only the type set and label).
    pub witnesses: bool,
    /// Shoot the inner layer of every layer-carrying witness.
    pub confirm_layers: bool,
    pub execution: Execution,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            envelope_n: 256,
            h_grid: 2001,
            k_samples: 32,
            witnesses: true,
            confirm_layers: false,
            execution: Execution::default(),
        }
    }
}

/// Interface traces `(u₋, u₊)` of each type.
fn traces(kind: SolutionType, c: f64, u_l: f64, u_r: f64) -> Result<(f64, f64, Option<f64>)> {
    Ok(match kind {
        RMinus | SMinus => (u_r, u_r, None),
        RPlus | SPlus => (u_l, u_l, None),
        RMinusRPlus => {
            let b = quadratic_ubar_rarefaction(c);
            (b, b, Some(b))
        }
        SMinusSPlus => {
            let b = quadratic_ubar_shock(c, u_l, u_r)?.ubar;
            (b, b, Some(b))
        }
        T | TRPlus | RMinusT | RMinusTRPlus => {
            if u_l < u_r {
                (u_l.max(0.0), u_r.min(c), None)
            } else {
                (u_l, u_r, None)
            }
        }
    })
}

fn witness(c: f64, u_l: f64, u_r: f64, kind: SolutionType, opts: &ClassifyOptions) -> Witness {
    let fm = FluxFunction::quadratic(0.0);
    let fp = FluxFunction::quadratic(c);
    let mut w = Witness {
        kind,
        u_minus: f64::NAN,
        u_plus: f64::NAN,
        ubar: None,
        constructed: false,
        trace_pass: false,
        selection_pass: false,
        matching_pass: None,
        layer_balance_ok: None,
        layer_found: None,
    };
    let Ok((um, up, ubar)) = traces(kind, c, u_l, u_r) else {
        return w;
    };
    (w.u_minus, w.u_plus, w.ubar) = (um, up, ubar);
    let Ok(mut sol) = CrdSolution::new(&fm, &fp, u_l, um, up, u_r, opts.envelope_n) else {
        return w;
    };
    sol.intermediate = ubar;
    w.constructed = true;
    w.trace_pass = check_trace_conditions(&sol).pass;
    w.selection_pass = build_h(&sol, opts.h_grid).map(|h| check_selection(&h, &sol).pass).unwrap_or(false);
    if kind.has_layer() {
        let profile = LayerProfile::endpoints_only(um, up);
        w.matching_pass = Some(check_matching(&sol, &profile, opts.k_samples).pass);
        w.layer_balance_ok = Some(layer_flux_balance_ok(&fm, &fp, um, up));
        if opts.confirm_layers {
            let shoot = ShootOptions { execution: opts.execution, ..ShootOptions::default() };
            w.layer_found = Some(shoot_connect_with(&fm, &fp, um, up, &shoot).is_some());
        }
        sol.layer = Some(profile);
    }
    w
}

pub fn classify_point(c: f64, u_l: f64, u_r: f64) -> Result<RegionReport> {
    classify_point_with(c, u_l, u_r, &ClassifyOptions::default())
}

pub fn classify_point_with(c: f64, u_l: f64, u_r: f64, opts: &ClassifyOptions) -> Result<RegionReport> {
    if c == 0.0 || !c.is_finite() {
        return arg("classification needs a finite nonzero offset c");
    }
    if !(u_l.is_finite() && u_r.is_finite()) {
        return arg("Riemann data must be finite");
    }
    let solutions = admissible_types(c, u_l, u_r);
    let witnesses = if opts.witnesses { solutions.iter().map(|&k| witness(c, u_l, u_r, k, opts)).collect() } else { Vec::new() };
    Ok(RegionReport { point: (u_l, u_r), area_label: area_label(c, u_l, u_r, &solutions), solutions, witnesses })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    #[serde(rename = "uL")]
    pub u_l: f64,
    #[serde(rename = "uR")]
    pub u_r: f64,
    pub area: String,
    pub solutions: Vec<SolutionType>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub c: f64,
    /// `[[a₁, b₁], [a₂, b₂]]` for `u_L` and `u_R`.
    pub r#box: [[f64; 2]; 2],
    pub resolution: usize,
    pub nodes: Vec<GridNode>,
}

impl RegionMap {
    /// Node count per signature (area label and solution set); the
    /// diagonal appears as `constant`.
    pub fn signatures(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for n in &self.nodes {
            let tags: Vec<&str> = n.solutions.iter().map(|s| s.tag()).collect();
            *out.entry(format!("{}:{{{}}}", n.area, tags.join(","))).or_insert(0) += 1;
        }
        out
    }

    /// Distinct signatures off the diagonal.
    pub fn distinct_signatures(&self) -> usize {
        self.signatures().keys().filter(|k| !k.starts_with("constant")).count()
    }

    /// Areas in which each type occurs.
    pub fn reverse_table(&self) -> BTreeMap<SolutionType, BTreeSet<String>> {
        let mut out: BTreeMap<SolutionType, BTreeSet<String>> = BTreeMap::new();
        for n in &self.nodes {
            for &s in &n.solutions {
                out.entry(s).or_default().insert(n.area.clone());
            }
        }
        out
    }
}

/// Classifies `resolution²` nodes of the box, `u_L` varying slowest.
pub fn classify_grid(c: f64, bounds: [[f64; 2]; 2], resolution: usize, execution: Execution) -> Result<RegionMap> {
    if resolution < 2 {
        return arg("grid resolution must be at least 2");
    }
    if !(bounds[0][0] < bounds[0][1] && bounds[1][0] < bounds[1][1]) {
        return arg("box bounds must be increasing");
    }
    let opts = ClassifyOptions { witnesses: false, execution, ..ClassifyOptions::default() };
    let idx: Vec<(usize, usize)> = (0..resolution).flat_map(|i| (0..resolution).map(move |j| (i, j))).collect();
    let nodes = execution.map_slice(&idx, |&(i, j)| {
        let u_l = lerp(bounds[0][0], bounds[0][1], i, resolution - 1);
        let u_r = lerp(bounds[1][0], bounds[1][1], j, resolution - 1);
        let r = classify_point_with(c, u_l, u_r, &opts)?;
        Ok(GridNode { u_l, u_r, area: r.area_label, multiplicity: r.solutions.len(), solutions: r.solutions.into_iter().collect() })
    });
    Ok(RegionMap { c, r#box: bounds, resolution, nodes: nodes.into_iter().collect::<Result<_>>()? })
}

use std::path::Path;

use coupled_riemann::classifier::{classify_grid, SolutionType};
use coupled_riemann::double_wave::{find_all_double_wave_with, DoubleWaveCandidate, ScanOptions, DEFAULT_SCAN};
use coupled_riemann::h_criterion::{
    build_h, check_selection, check_trace_conditions, horizon_m, HProfile, SelectionVerdict, TraceVerdict, DEFAULT_H_GRID,
};
use coupled_riemann::inner_layer::*;
use coupled_riemann::viscous::{viscous_limit_study, StudyRow, DEFAULT_GRID};
use coupled_riemann::{CrdSolution, Execution, FluxFunction};
use serde::Serialize;

use crate::config::{Data, RunConfig};
use crate::error::CliError;
use crate::output::{write_csv, write_json};

/// Whether a command produced a result; maps to exit codes 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Found,
    Empty,
}

const DEFAULT_CSV_POINTS: usize = 801;
const DEFAULT_EPS: [f64; 3] = [0.2, 0.1, 0.05];
const DEFAULT_RESOLUTION: usize = 60;

#[derive(Serialize)]
struct FluxConfig<'a> {
    flux_minus: &'a FluxFunction,
    flux_plus: &'a FluxFunction,
}

#[derive(Serialize)]
struct CandidateReport {
    #[serde(flatten)]
    candidate: DoubleWaveCandidate,
    selection: SelectionVerdict,
    trace: TraceVerdict,
    support: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    candidates: Vec<CandidateReport>,
    flux_config: FluxConfig<'a>,
    data: Data,
    note: Option<&'static str>,
}

pub fn solve(cfg: &RunConfig, out: &Path) -> Result<Status, CliError> {
    let (fm, fp) = cfg.fluxes()?;
    let d = cfg.data()?;
    let flux_config = FluxConfig { flux_minus: &fm, flux_plus: &fp };
    if d.u_l == d.u_r {
        write_json(out, "candidates.json", &SolveReport { candidates: vec![], flux_config, data: d, note: Some("constant solution") })?;
        return Ok(Status::Empty);
    }
    let opts =
        ScanOptions { scan_n: cfg.scan.unwrap_or(DEFAULT_SCAN), h_grid: cfg.h_grid.unwrap_or(DEFAULT_H_GRID), ..ScanOptions::default() };
    let found = find_all_double_wave_with(&fm, &fp, d.u_l, d.u_r, &opts)?;
    let mut sols = Vec::with_capacity(found.len());
    let mut candidates = Vec::with_capacity(found.len());
    for c in found {
        let sol = CrdSolution::double_wave(&fm, &fp, d.u_l, c.ubar, d.u_r, opts.envelope_n)?;
        let hp = build_h(&sol, opts.h_grid)?;
        candidates.push(CandidateReport {
            selection: check_selection(&hp, &sol),
            trace: check_trace_conditions(&sol),
            support: sol.support(),
            candidate: c,
        });
        sols.push((sol, hp));
    }

    let m = horizon_m(&fm, &fp, d.u_l, d.u_r);
    let n = cfg.grid.unwrap_or(DEFAULT_CSV_POINTS).max(2);
    let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { m } else { -m + 2.0 * m * i as f64 / (n - 1) as f64 }).collect();
    let names: Vec<String> = (0..sols.len()).map(|k| format!("candidate_{k}")).collect();
    let header = |first: &'static str| std::iter::once(first).chain(names.iter().map(String::as_str)).collect::<Vec<_>>();
    let row = |x: f64, f: &dyn Fn(&(CrdSolution, HProfile)) -> f64| std::iter::once(x).chain(sols.iter().map(f)).collect::<Vec<f64>>();
    write_csv(out, "u.csv", &header("xi"), xs.iter().map(|&x| row(x, &|(s, _)| s.eval(x))))?;
    write_csv(out, "h.csv", &header("xi"), xs.iter().map(|&x| row(x, &|(_, h)| h.function.eval(x))))?;

    let status = if candidates.is_empty() { Status::Empty } else { Status::Found };
    let note = candidates.is_empty().then_some("no double-wave candidate");
    write_json(out, "candidates.json", &SolveReport { candidates, flux_config, data: d, note })?;
    Ok(status)
}

#[derive(Serialize)]
struct ViscousRun {
    eps: f64,
    status: &'static str,
    error: Option<String>,
    #[serde(flatten)]
    row: Option<StudyRow>,
    file: Option<String>,
}

#[derive(Serialize)]
struct ViscousReport<'a> {
    data: Data,
    flux_config: FluxConfig<'a>,
    /// `ū` of the unique double-wave candidate used as reference.
    reference_ubar: Option<f64>,
    runs: Vec<ViscousRun>,
}

pub fn viscous(cfg: &RunConfig, out: &Path) -> Result<Status, CliError> {
    let (fm, fp) = cfg.fluxes()?;
    let d = cfg.data()?;
    let eps = cfg.eps.clone().unwrap_or(DEFAULT_EPS.to_vec());
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CliError::Config("eps list must be strictly decreasing".into()));
    }
    let n = cfg.grid.unwrap_or(DEFAULT_GRID);

    let reference = if d.u_l == d.u_r {
        None
    } else {
        let opts = ScanOptions {
            scan_n: cfg.scan.unwrap_or(DEFAULT_SCAN),
            h_grid: cfg.h_grid.unwrap_or(DEFAULT_H_GRID),
            ..ScanOptions::default()
        };
        match find_all_double_wave_with(&fm, &fp, d.u_l, d.u_r, &opts)?.as_slice() {
            [c] => Some(CrdSolution::double_wave(&fm, &fp, d.u_l, c.ubar, d.u_r, opts.envelope_n)?),
            _ => None,
        }
    };

    // One study per ε so a failure is recorded without losing the others.
    let results = Execution::default()
        .map_slice(&eps, |&e| viscous_limit_study(&fm, &fp, d.u_l, d.u_r, &[e], n, reference.as_ref(), Execution::Sequential));
    let mut runs = Vec::with_capacity(eps.len());
    for (&e, res) in eps.iter().zip(results) {
        match res.map(|mut v| v.remove(0)) {
            Ok((row, sol)) => {
                let file = format!("u_eps_{e}.csv");
                let rows = sol.grid.iter().zip(&sol.u).zip(&sol.v).map(|((&x, &u), &v)| vec![x, u, v]);
                write_csv(out, &file, &["xi", "u", "v"], rows)?;
                runs.push(ViscousRun { eps: e, status: "converged", error: None, row: Some(row), file: Some(file) });
            }
            Err(err) => runs.push(ViscousRun { eps: e, status: "failed", error: Some(err.to_string()), row: None, file: None }),
        }
    }
    let status = if runs.iter().any(|r| r.row.is_some()) { Status::Found } else { Status::Empty };
    let report = ViscousReport {
        data: d,
        flux_config: FluxConfig { flux_minus: &fm, flux_plus: &fp },
        reference_ubar: reference.and_then(|r| r.intermediate),
        runs,
    };
    write_json(out, "report.json", &report)?;
    Ok(status)
}

#[derive(Serialize)]
struct LayerVerdict {
    found: bool,
    target_minus: f64,
    target_plus: f64,
    flux_balance_ok: bool,
    u_minus_inf: Option<f64>,
    u_plus_inf: Option<f64>,
    nontrivial: Option<bool>,
    ode_residual: Option<f64>,
    flux_relation_residual: Option<f64>,
    asymptotic: Option<AsymptoticVerdict>,
    note: Option<&'static str>,
}

pub fn layer(cfg: &RunConfig, out: &Path) -> Result<Status, CliError> {
    let (fm, fp) = cfg.fluxes()?;
    let d = cfg.data()?;
    let opts = ShootOptions {
        y_max: cfg.y_max.unwrap_or(DEFAULT_Y),
        steps: cfg.grid.unwrap_or(DEFAULT_STEPS),
        window: cfg.window.map(|w| (w[0], w[1])),
        ..ShootOptions::default()
    };
    let profile = shoot_connect_with(&fm, &fp, d.u_l, d.u_r, &opts);
    let mut verdict = LayerVerdict {
        found: profile.is_some(),
        target_minus: d.u_l,
        target_plus: d.u_r,
        flux_balance_ok: layer_flux_balance_ok(&fm, &fp, d.u_l, d.u_r),
        u_minus_inf: None,
        u_plus_inf: None,
        nontrivial: None,
        ode_residual: None,
        flux_relation_residual: None,
        asymptotic: None,
        note: None,
    };
    let status = match &profile {
        Some(p) => {
            verdict.u_minus_inf = p.u_minus_inf;
            verdict.u_plus_inf = p.u_plus_inf;
            verdict.nontrivial = Some(p.nontrivial);
            verdict.ode_residual = Some(ode_residual(p, &fm, &fp));
            verdict.flux_relation_residual = flux_relation_residual(p, &fm, &fp);
            verdict.asymptotic = Some(check_asymptotic_conditions(p, &fm, &fp));
            let rows = (0..p.y.len()).map(|i| vec![p.y[i], p.u[i], p.v[i], p.du[i]]);
            write_csv(out, "layer.csv", &["y", "U", "V", "dU"], rows)?;
            Status::Found
        }
        None => {
            verdict.note = Some("none");
            Status::Empty
        }
    };
    write_json(out, "verdict.json", &verdict)?;
    Ok(status)
}

#[derive(Serialize)]
struct RegionsReport<'a> {
    #[serde(flatten)]
    map: &'a coupled_riemann::classifier::RegionMap,
    signatures: std::collections::BTreeMap<String, usize>,
    distinct_signatures: usize,
    reverse_table: std::collections::BTreeMap<String, std::collections::BTreeSet<String>>,
}

pub fn classify(cfg: &RunConfig, out: &Path) -> Result<Status, CliError> {
    let c = cfg.offset()?;
    let bounds = cfg.r#box.unwrap_or(if c < 0.0 { [[-4.0, 3.0], [-4.0, 3.0]] } else { [[-1.0, 2.0], [-1.0, 2.0]] });
    let resolution = cfg.grid.unwrap_or(DEFAULT_RESOLUTION);
    let map = classify_grid(c, bounds, resolution, Execution::default())?;
    let report = RegionsReport {
        map: &map,
        signatures: map.signatures(),
        distinct_signatures: map.distinct_signatures(),
        reverse_table: map.reverse_table().into_iter().map(|(t, a)| (t.tag().to_string(), a)).collect(),
    };
    write_json(out, "regions.json", &report)?;

    let mut csv = String::from("uL [-],uR [-],area,solutions,multiplicity\n");
    for node in &map.nodes {
        let tags: Vec<&str> = node.solutions.iter().map(|t: &SolutionType| t.tag()).collect();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            crate::output::num(node.u_l),
            crate::output::num(node.u_r),
            node.area,
            tags.join(";"),
            node.multiplicity
        ));
    }
    std::fs::write(out.join("regions.csv"), csv)?;
    Ok(Status::Found)
}

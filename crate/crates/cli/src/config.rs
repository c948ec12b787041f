use std::path::Path;

use coupled_riemann::FluxFunction;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Data {
    #[serde(rename = "uL")]
    pub u_l: f64,
    #[serde(rename = "uR")]
    pub u_r: f64,
}

/// Run configuration read from JSON. Every knob is optional; flags on the
/// command line override the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub flux_minus: Option<FluxFunction>,
    pub flux_plus: Option<FluxFunction>,
    pub data: Option<Data>,
    /// Viscosity list, strictly decreasing.
    pub eps: Option<Vec<f64>>,
    /// Grid size: CSV samples (solve), viscous nodes (viscous), layer
    /// steps (layer), or resolution (classify).
    pub grid: Option<usize>,
    pub scan: Option<usize>,
    pub h_grid: Option<usize>,
    pub y_max: Option<f64>,
    /// State window for the layer integrator.
    pub window: Option<[f64; 2]>,
    /// Offset of the quadratic pair `u²/2`, `(u − c)²/2` for `classify`.
    pub c: Option<f64>,
    pub r#box: Option<[[f64; 2]; 2]>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for f in [&self.flux_minus, &self.flux_plus].into_iter().flatten() {
            f.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(d) = self.data {
            if !(d.u_l.is_finite() && d.u_r.is_finite()) {
                return Err(CliError::Config("data must be finite".into()));
            }
        }
        if let Some(eps) = &self.eps {
            if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
                return Err(CliError::Config("eps values must be positive".into()));
            }
        }
        for (name, v) in [("grid", self.grid), ("scan", self.scan), ("h_grid", self.h_grid)] {
            if v == Some(0) {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        if self.y_max.is_some_and(|y| !(y > 0.0)) {
            return Err(CliError::Config("y_max must be positive".into()));
        }
        Ok(())
    }

    pub fn fluxes(&self) -> Result<(FluxFunction, FluxFunction), CliError> {
        match (&self.flux_minus, &self.flux_plus) {
            (Some(m), Some(p)) => Ok((m.clone(), p.clone())),
            _ => Err(CliError::Config("flux_minus and flux_plus are required".into())),
        }
    }

    pub fn data(&self) -> Result<Data, CliError> {
        self.data.ok_or_else(|| CliError::Config("data {uL, uR} is required".into()))
    }

    /// `c` from the config, or from a quadratic pair with `f₋ = u²/2`.
    pub fn offset(&self) -> Result<f64, CliError> {
        if let Some(c) = self.c {
            return Ok(c);
        }
        match (&self.flux_minus, &self.flux_plus) {
            (Some(FluxFunction::Quadratic { c: 0.0 }), Some(FluxFunction::Quadratic { c })) => Ok(*c),
            _ => Err(CliError::Config("classify needs c or a quadratic pair with flux_minus c = 0".into())),
        }
    }
}

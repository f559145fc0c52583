//! Run-configuration ingestion: a flat JSON object with one key per
//! scenario parameter, dB/dBm quantities converted to linear on load.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{db_to_linear, RunConfig, SolverKind};
use crate::channel::Scenario;
use crate::error::{ConfigError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_tx: u32,
    n_rx: u32,
    k_paths: u32,
    angles_deg: Vec<f64>,
    rician_factor: f64,
    beta_prior_var: f64,
    noise_radar_dbm: f64,
    noise_comm_dbm: f64,
    power_budget_dbm: f64,
    snapshots: u32,
    pfa: f64,
    gamma_grid_db: Vec<f64>,
    power_grid_dbm: Option<Vec<f64>>,
    trials: u32,
    seed: u64,
    solver: String,
}

fn out_of_range(key: &'static str, detail: impl Into<String>) -> ConfigError {
    ConfigError::OutOfRange {
        key,
        detail: detail.into(),
    }
}

/// Loads and validates a run configuration.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawConfig =
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;

    if raw.n_tx < 1 {
        return Err(out_of_range("n_tx", "must be at least 1").into());
    }
    if raw.n_rx < 1 {
        return Err(out_of_range("n_rx", "must be at least 1").into());
    }
    if raw.k_paths < 1 {
        return Err(out_of_range("k_paths", "must be at least 1").into());
    }
    let k = raw.k_paths as usize;
    if raw.angles_deg.len() < k {
        return Err(ConfigError::AngleCount {
            expected: k,
            got: raw.angles_deg.len(),
        }
        .into());
    }
    // LoS angle plus the first K-1 clutter angles from the configured list.
    let angles_deg = &raw.angles_deg[..k];
    for a in angles_deg {
        if !a.is_finite() || a.abs() > 90.0 {
            return Err(out_of_range("angles_deg", format!("angle {a} outside [-90, 90]")).into());
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if angles_deg[i] == angles_deg[j] {
                return Err(ConfigError::DuplicateAngles.into());
            }
        }
    }
    if !raw.rician_factor.is_finite() || raw.rician_factor < 0.0 {
        return Err(out_of_range("rician_factor", "must be finite and >= 0").into());
    }
    if !raw.beta_prior_var.is_finite() || raw.beta_prior_var <= 0.0 {
        return Err(out_of_range("beta_prior_var", "must be finite and > 0").into());
    }
    for (key, v) in [
        ("noise_radar_dbm", raw.noise_radar_dbm),
        ("noise_comm_dbm", raw.noise_comm_dbm),
        ("power_budget_dbm", raw.power_budget_dbm),
    ] {
        if !v.is_finite() {
            return Err(out_of_range(key, "must be finite").into());
        }
    }
    if raw.snapshots < 1 {
        return Err(out_of_range("snapshots", "must be at least 1").into());
    }
    if !(raw.pfa > 0.0 && raw.pfa < 1.0) {
        return Err(out_of_range("pfa", "must lie strictly between 0 and 1").into());
    }
    if raw.gamma_grid_db.iter().any(|g| !g.is_finite()) {
        return Err(out_of_range("gamma_grid_db", "entries must be finite").into());
    }
    if let Some(grid) = &raw.power_grid_dbm {
        if grid.iter().any(|g| !g.is_finite()) {
            return Err(out_of_range("power_grid_dbm", "entries must be finite").into());
        }
    }
    if raw.trials < 1 {
        return Err(out_of_range("trials", "must be at least 1").into());
    }
    let solver = SolverKind::parse(&raw.solver)
        .ok_or_else(|| ConfigError::UnknownSolver(raw.solver.clone()))?;
    if solver == SolverKind::ClosedForm && k != 2 {
        return Err(out_of_range(
            "solver",
            format!("closed-form requires k_paths = 2, got {k}"),
        )
        .into());
    }

    let scenario = Scenario {
        n_tx: raw.n_tx as usize,
        n_rx: raw.n_rx as usize,
        k_paths: k,
        angles: angles_deg.iter().map(|d| d.to_radians()).collect(),
        rician: raw.rician_factor,
        beta_var: raw.beta_prior_var,
        noise_radar: db_to_linear(raw.noise_radar_dbm),
        noise_comm: db_to_linear(raw.noise_comm_dbm),
        power_budget: db_to_linear(raw.power_budget_dbm),
        snapshots: raw.snapshots as usize,
        pfa: raw.pfa,
    };
    scenario.validate()?;

    Ok(RunConfig {
        scenario,
        gamma_grid_db: raw.gamma_grid_db,
        power_grid_dbm: raw.power_grid_dbm.unwrap_or_default(),
        trials: raw.trials as usize,
        seed: raw.seed,
        solver,
    })
}

//! End-to-end two-epoch pipeline (estimate, allocate, detect/rate), Monte
//! Carlo sweeps, configuration ingestion, CSV persistence and SVG charts.
//!
//! Trials are embarrassingly parallel: each derives its own random stream
//! from `(seed, trial index)`, and records are assembled in trial-major
//! order, so output bytes never depend on the worker count.

mod config;
mod csv;
mod svg;

pub use config::load_config;
pub use csv::{read_csv, write_csv};
pub use svg::render_svg;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::allocate::{
    max_threshold, sc_allocation, sca_allocate, solve_single_nlos, cc_allocation,
    DEFAULT_EPSILON, DEFAULT_MAX_ITERS,
};
use crate::channel::{
    comm_gains, rate, sample_realization, snr_from_gains, trial_rng, ChannelRealization,
    PowerAllocation, Scenario,
};
use crate::core::{steering_overlap, steering_rx};
use crate::error::{Error, Result};
use crate::sensing::{
    build_estimation_model, clutter_covariance, eta_pair, max_scnr, mmse_estimate, mvdr_weights,
    prob_detection, probe_symbols, scnr_with_weights, synthesize_observation, EstimationResult,
};

/// Which allocation rule the pipeline applies in the second epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Successive convex approximation (any K).
    Sca,
    /// Single-NLoS closed form (K = 2 only).
    ClosedForm,
    /// Sensing-centric corner.
    Sc,
    /// Communication-centric corner (ignores the SCNR threshold).
    Cc,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Sca => "sca",
            SolverKind::ClosedForm => "closed-form",
            SolverKind::Sc => "sc",
            SolverKind::Cc => "cc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sca" => Some(SolverKind::Sca),
            "closed-form" => Some(SolverKind::ClosedForm),
            "sc" => Some(SolverKind::Sc),
            "cc" => Some(SolverKind::Cc),
            _ => None,
        }
    }
}

/// Outcome class of one (trial, threshold) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialStatus {
    Ok,
    /// The threshold exceeded this trial's estimated `Γ_T`.
    Infeasible,
}

impl TrialStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialStatus::Ok => "ok",
            TrialStatus::Infeasible => "infeasible",
        }
    }
}

/// One pipeline outcome. Metric fields are NaN on infeasible records so row
/// counts stay predictable across the grid.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    /// SCNR threshold of this cell in dB; NaN for threshold-free rows
    /// (power sweeps).
    pub gamma_db: f64,
    pub pt_dbm: f64,
    pub solver: SolverKind,
    pub status: TrialStatus,
    /// Achievable rate in bits/s/Hz.
    pub rate: f64,
    /// Probability of detection.
    pub pd: f64,
    /// SCNR predicted from the estimated gains, dB.
    pub scnr_est_db: f64,
    /// SCNR realized with the true reflection coefficients under the
    /// deployed beamformer, dB.
    pub scnr_true_db: f64,
    /// Subproblem solves spent by the allocator (0 for closed forms).
    pub iters: usize,
    pub allocation: Option<PowerAllocation>,
}

/// A full run description: scenario plus sweep grids and solver choice.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// SCNR thresholds to sweep, in dB.
    pub gamma_grid_db: Vec<f64>,
    /// Power budgets to sweep, in dBm (empty when not configured).
    pub power_grid_dbm: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverKind,
}

impl RunConfig {
    pub fn pfa(&self) -> f64 {
        self.scenario.pfa
    }
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// First epoch: probe with the uniform split, draw one stacked observation,
/// and run the MMSE estimator.
pub fn estimate_reflections(
    scenario: &Scenario,
    realization: &ChannelRealization,
    rng: &mut ChaCha8Rng,
) -> Result<EstimationResult> {
    let p_uniform = scenario.power_budget / scenario.k_paths as f64;
    let symbols = probe_symbols(scenario.k_paths, scenario.snapshots, rng);
    let model = build_estimation_model(scenario, &symbols, p_uniform);
    let y = synthesize_observation(&model, &realization.beta, scenario.noise_radar, rng);
    mmse_estimate(&y, &model, scenario.beta_var, scenario.noise_radar)
}

/// Runs the configured allocator on estimated gains. Returns the allocation
/// and the subproblem-solve count.
pub fn allocate_with(
    scenario: &Scenario,
    solver: SolverKind,
    gamma_hat: &[f64],
    x: &[f64],
    gamma_linear: f64,
) -> Result<(PowerAllocation, usize)> {
    let pt = scenario.power_budget;
    match solver {
        SolverKind::Sca => {
            let state = sca_allocate(
                scenario,
                gamma_hat,
                x,
                gamma_linear,
                DEFAULT_EPSILON,
                DEFAULT_MAX_ITERS,
            )?;
            Ok((state.allocation, state.iterations))
        }
        SolverKind::ClosedForm => {
            if scenario.k_paths != 2 {
                return Err(Error::Invalid(
                    "the closed-form solver requires exactly one NLoS path (k_paths = 2)".into(),
                ));
            }
            let overlap = steering_overlap(scenario.angles[0], scenario.angles[1], scenario.n_rx);
            let p = solve_single_nlos(
                gamma_hat[0],
                gamma_hat[1],
                overlap,
                x[0],
                x[1],
                pt,
                gamma_linear,
            )?;
            Ok((p, 0))
        }
        SolverKind::Sc => Ok((sc_allocation(pt, scenario.k_paths), 0)),
        SolverKind::Cc => Ok((cc_allocation(x, pt)?, 0)),
    }
}

/// Second epoch: allocate with the estimated gains, then score the result
/// (rate from the true gains, detection statistics from the true prior, both
/// SCNR views). A NaN `gamma_db` disables the threshold, as in power sweeps
/// where only the corner designs are evaluated.
pub fn record_trial(
    scenario: &Scenario,
    solver: SolverKind,
    estimate: &EstimationResult,
    realization: &ChannelRealization,
    x: &[f64],
    gamma_db: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let pt_dbm = linear_to_db(scenario.power_budget);
    let gamma_linear = if gamma_db.is_nan() {
        0.0
    } else {
        db_to_linear(gamma_db)
    };
    let gamma_max = max_threshold(estimate.gamma[0], scenario.power_budget);
    if gamma_linear > gamma_max {
        return Ok(TrialRecord {
            trial,
            gamma_db,
            pt_dbm,
            solver,
            status: TrialStatus::Infeasible,
            rate: f64::NAN,
            pd: f64::NAN,
            scnr_est_db: f64::NAN,
            scnr_true_db: f64::NAN,
            iters: 0,
            allocation: None,
        });
    }

    let threshold_for_solver = match solver {
        // The corner designs do not depend on the threshold.
        SolverKind::Sc | SolverKind::Cc => 0.0,
        _ => gamma_linear,
    };
    let (allocation, iters) =
        allocate_with(scenario, solver, &estimate.gamma, x, threshold_for_solver)?;

    let angles = &scenario.angles;
    let sigma_est = clutter_covariance(&allocation, &estimate.gamma, angles, scenario.n_rx);
    let b0 = steering_rx(angles[0], scenario.n_rx);
    let w = mvdr_weights(&sigma_est, &b0)?;
    let scnr_est = max_scnr(&allocation, &estimate.gamma, angles, scenario.n_rx)?;
    let beta_sq: Vec<f64> = realization.beta.iter().map(|b| b.norm_sqr()).collect();
    let scnr_true = scnr_with_weights(&w, &allocation, &beta_sq, angles, scenario.noise_radar);
    let (eta0, eta1) = eta_pair(&allocation, &w, angles, scenario.beta_var, scenario.noise_radar);
    let pd = prob_detection(eta0, eta1, scenario.pfa);
    let snr = snr_from_gains(&allocation, x, scenario.noise_comm);

    Ok(TrialRecord {
        trial,
        gamma_db,
        pt_dbm,
        solver,
        status: TrialStatus::Ok,
        rate: rate(snr),
        pd,
        scnr_est_db: linear_to_db(scnr_est),
        scnr_true_db: linear_to_db(scnr_true),
        iters,
        allocation: Some(allocation),
    })
}

/// Full two-epoch pipeline for one realization and one threshold.
pub fn run_pipeline(
    config: &RunConfig,
    realization: &ChannelRealization,
    gamma_db: f64,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord> {
    let estimate = estimate_reflections(&config.scenario, realization, rng)?;
    let x = comm_gains(&config.scenario, realization);
    record_trial(
        &config.scenario,
        config.solver,
        &estimate,
        realization,
        &x,
        gamma_db,
        0,
    )
}

/// Threshold sweep: one estimation epoch per trial, then one record per grid
/// threshold. Thresholds above the trial's estimated `Γ_T` come back with
/// `status = infeasible` instead of being dropped.
pub fn sweep_gamma(config: &RunConfig) -> Result<Vec<TrialRecord>> {
    config.scenario.validate()?;
    let per_trial: Result<Vec<Vec<TrialRecord>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let scenario = &config.scenario;
            let mut rng = trial_rng(config.seed, t as u64);
            let realization = sample_realization(scenario, &mut rng);
            let estimate = estimate_reflections(scenario, &realization, &mut rng)?;
            let x = comm_gains(scenario, &realization);
            config
                .gamma_grid_db
                .iter()
                .map(|&gdb| {
                    record_trial(scenario, config.solver, &estimate, &realization, &x, gdb, t)
                })
                .collect()
        })
        .collect();
    Ok(per_trial?.into_iter().flatten().collect())
}

/// Budget sweep: for each trial and each grid power the pipeline evaluates
/// the two tradeoff endpoints — the sensing-centric design (best detection)
/// and the communication-centric design (best rate). The realization is
/// drawn once per trial so the endpoints are comparable across budgets.
pub fn sweep_power(config: &RunConfig) -> Result<Vec<TrialRecord>> {
    if config.power_grid_dbm.is_empty() {
        return Ok(Vec::new());
    }
    config.scenario.validate()?;
    let per_trial: Result<Vec<Vec<TrialRecord>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t as u64);
            let realization = sample_realization(&config.scenario, &mut rng);
            let mut records = Vec::with_capacity(config.power_grid_dbm.len() * 2);
            for &pt_dbm in &config.power_grid_dbm {
                let mut scenario = config.scenario.clone();
                scenario.power_budget = db_to_linear(pt_dbm);
                let estimate = estimate_reflections(&scenario, &realization, &mut rng)?;
                let x = comm_gains(&scenario, &realization);
                for solver in [SolverKind::Sc, SolverKind::Cc] {
                    records.push(record_trial(
                        &scenario,
                        solver,
                        &estimate,
                        &realization,
                        &x,
                        f64::NAN,
                        t,
                    )?);
                }
            }
            Ok(records)
        })
        .collect();
    Ok(per_trial?.into_iter().flatten().collect())
}

/// Per-threshold averages over the ok records, in grid order.
#[derive(Debug, Clone)]
pub struct GammaSummary {
    pub gamma_db: f64,
    pub n_ok: usize,
    pub n_total: usize,
    pub mean_rate: f64,
    pub mean_pd: f64,
    /// Mean LoS share `p0 / P_T` of the ok allocations.
    pub mean_los_fraction: f64,
}

pub fn summarize_by_gamma(records: &[TrialRecord]) -> Vec<GammaSummary> {
    let mut keys: Vec<u64> = Vec::new();
    for r in records {
        let bits = r.gamma_db.to_bits();
        if !keys.contains(&bits) {
            keys.push(bits);
        }
    }
    keys.iter()
        .map(|&bits| {
            let gamma_db = f64::from_bits(bits);
            let mut n_ok = 0usize;
            let mut n_total = 0usize;
            let mut rate_sum = 0.0;
            let mut pd_sum = 0.0;
            let mut los_sum = 0.0;
            for r in records.iter().filter(|r| r.gamma_db.to_bits() == bits) {
                n_total += 1;
                if r.status == TrialStatus::Ok {
                    n_ok += 1;
                    rate_sum += r.rate;
                    pd_sum += r.pd;
                    if let Some(a) = &r.allocation {
                        los_sum += a.los() / a.total();
                    }
                }
            }
            let denom = n_ok.max(1) as f64;
            GammaSummary {
                gamma_db,
                n_ok,
                n_total,
                mean_rate: rate_sum / denom,
                mean_pd: pd_sum / denom,
                mean_los_fraction: los_sum / denom,
            }
        })
        .collect()
}

/// Per-(budget, solver) averages over the ok records, in first-seen order.
#[derive(Debug, Clone)]
pub struct PowerSummary {
    pub pt_dbm: f64,
    pub solver: SolverKind,
    pub n_ok: usize,
    pub mean_rate: f64,
    pub mean_pd: f64,
}

pub fn summarize_by_power(records: &[TrialRecord]) -> Vec<PowerSummary> {
    let mut keys: Vec<(u64, SolverKind)> = Vec::new();
    for r in records {
        let key = (r.pt_dbm.to_bits(), r.solver);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.iter()
        .map(|&(bits, solver)| {
            let mut n_ok = 0usize;
            let mut rate_sum = 0.0;
            let mut pd_sum = 0.0;
            for r in records
                .iter()
                .filter(|r| r.pt_dbm.to_bits() == bits && r.solver == solver)
            {
                if r.status == TrialStatus::Ok {
                    n_ok += 1;
                    rate_sum += r.rate;
                    pd_sum += r.pd;
                }
            }
            let denom = n_ok.max(1) as f64;
            PowerSummary {
                pt_dbm: f64::from_bits(bits),
                solver,
                n_ok,
                mean_rate: rate_sum / denom,
                mean_pd: pd_sum / denom,
            }
        })
        .collect()
}

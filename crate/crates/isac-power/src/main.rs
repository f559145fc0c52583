//! Thin CLI over the library: one subcommand per workflow.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isac_power::channel::{comm_gains, sample_realization, trial_rng};
use isac_power::core::steering_rx;
use isac_power::harness::{
    allocate_with, db_to_linear, estimate_reflections, linear_to_db, load_config, record_trial,
    render_svg, summarize_by_gamma, summarize_by_power, sweep_gamma, sweep_power, write_csv,
    RunConfig, SolverKind,
};
use isac_power::sensing::{
    clutter_covariance, eta_pair, mvdr_weights, simulate_detection, DetectionStats,
};
use isac_power::{allocate, ConfigError, Error};

#[derive(Parser)]
#[command(
    name = "isac-power",
    version,
    about = "LoS/NLoS power allocation simulator for monostatic ISAC"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured solver (sca|closed-form|sc|cc).
    #[arg(long)]
    solver: Option<String>,
    /// Override the configured trial count.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one realization and print the allocation with its metrics.
    Allocate {
        #[command(flatten)]
        common: Common,
        /// SCNR threshold in dB (defaults to the first grid entry).
        #[arg(long)]
        gamma_db: Option<f64>,
    },
    /// Sweep the SCNR threshold grid over Monte Carlo trials, writing CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Output CSV path.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Sweep the power budget grid, recording both tradeoff endpoints.
    PowerSweep {
        #[command(flatten)]
        common: Common,
        /// Output CSV path.
        #[arg(long, default_value = "power_sweep.csv")]
        out: PathBuf,
    },
    /// Validate the analytic detection probabilities by Monte Carlo.
    Detect {
        #[command(flatten)]
        common: Common,
        /// SCNR threshold in dB (defaults to the first grid entry).
        #[arg(long)]
        gamma_db: Option<f64>,
    },
    /// Render CSV columns as an SVG line chart.
    Render {
        /// Input CSV file.
        input: PathBuf,
        /// Column used for the x axis.
        #[arg(long)]
        x: String,
        /// Columns plotted on the y axis.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        /// Output SVG path.
        #[arg(long, default_value = "chart.svg")]
        out: PathBuf,
    },
}

fn apply_overrides(cfg: &mut RunConfig, common: &Common) -> Result<(), Error> {
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        if trials == 0 {
            return Err(ConfigError::OutOfRange {
                key: "trials",
                detail: "must be at least 1".into(),
            }
            .into());
        }
        cfg.trials = trials;
    }
    if let Some(solver) = &common.solver {
        let parsed = SolverKind::parse(solver)
            .ok_or_else(|| ConfigError::UnknownSolver(solver.clone()))?;
        if parsed == SolverKind::ClosedForm && cfg.scenario.k_paths != 2 {
            return Err(ConfigError::OutOfRange {
                key: "solver",
                detail: "closed-form requires k_paths = 2".into(),
            }
            .into());
        }
        cfg.solver = parsed;
    }
    Ok(())
}

fn pick_gamma_db(cfg: &RunConfig, flag: Option<f64>) -> Result<f64, Error> {
    flag.or_else(|| cfg.gamma_grid_db.first().copied())
        .ok_or_else(|| {
            ConfigError::OutOfRange {
                key: "gamma_grid_db",
                detail: "empty grid and no --gamma-db given".into(),
            }
            .into()
        })
}

fn cmd_allocate(common: Common, gamma_db: Option<f64>) -> Result<(), Error> {
    let mut cfg = load_config(&common.config)?;
    apply_overrides(&mut cfg, &common)?;
    let gamma_db = pick_gamma_db(&cfg, gamma_db)?;

    let scenario = &cfg.scenario;
    let mut rng = trial_rng(cfg.seed, 0);
    let realization = sample_realization(scenario, &mut rng);
    let estimate = estimate_reflections(scenario, &realization, &mut rng)?;
    let x = comm_gains(scenario, &realization);

    let gamma_linear = db_to_linear(gamma_db);
    let gamma_max = allocate::max_threshold(estimate.gamma[0], scenario.power_budget);
    if gamma_linear > gamma_max {
        eprintln!(
            "threshold {gamma_db:.2} dB exceeds this realization's maximum {:.2} dB",
            linear_to_db(gamma_max)
        );
        return Err(Error::InfeasibleThreshold {
            margin: gamma_linear - gamma_max,
        });
    }

    let record = record_trial(scenario, cfg.solver, &estimate, &realization, &x, gamma_db, 0)?;
    let alloc = record.allocation.as_ref().expect("feasible record");

    println!(
        "solver={} gamma={:.2} dB (max {:.2} dB) P_T={:.1} mW",
        cfg.solver.as_str(),
        gamma_db,
        linear_to_db(gamma_max),
        scenario.power_budget
    );
    for (k, p) in alloc.as_slice().iter().enumerate() {
        println!(
            "  p{k} = {p:12.6} mW   ({:5.1}% of budget)",
            100.0 * p / scenario.power_budget
        );
    }
    println!("rate        = {:.6} bits/s/Hz", record.rate);
    println!("P_D         = {:.6}", record.pd);
    println!("SCNR (est)  = {:.4} dB", record.scnr_est_db);
    println!("SCNR (true) = {:.4} dB", record.scnr_true_db);
    println!("solver iterations: {}", record.iters);
    Ok(())
}

fn cmd_sweep(common: Common, out: PathBuf) -> Result<(), Error> {
    let mut cfg = load_config(&common.config)?;
    apply_overrides(&mut cfg, &common)?;
    let records = sweep_gamma(&cfg)?;
    write_csv(&records, cfg.scenario.k_paths, &out)?;
    println!(
        "wrote {} records ({} trials x {} thresholds) to {}",
        records.len(),
        cfg.trials,
        cfg.gamma_grid_db.len(),
        out.display()
    );
    println!("gamma_db    ok/total    mean_rate    mean_pd    mean_p0/P_T");
    for s in summarize_by_gamma(&records) {
        println!(
            "{:8.2} {:6}/{:<6} {:12.6} {:10.6} {:12.6}",
            s.gamma_db, s.n_ok, s.n_total, s.mean_rate, s.mean_pd, s.mean_los_fraction
        );
    }
    Ok(())
}

fn cmd_power_sweep(common: Common, out: PathBuf) -> Result<(), Error> {
    let mut cfg = load_config(&common.config)?;
    apply_overrides(&mut cfg, &common)?;
    if cfg.power_grid_dbm.is_empty() {
        return Err(ConfigError::OutOfRange {
            key: "power_grid_dbm",
            detail: "power-sweep needs a nonempty grid".into(),
        }
        .into());
    }
    let records = sweep_power(&cfg)?;
    write_csv(&records, cfg.scenario.k_paths, &out)?;
    println!("wrote {} records to {}", records.len(), out.display());
    println!("pt_dbm   solver        mean_rate    mean_pd");
    for s in summarize_by_power(&records) {
        println!(
            "{:6.1}   {:<12} {:12.6} {:10.6}",
            s.pt_dbm,
            s.solver.as_str(),
            s.mean_rate,
            s.mean_pd
        );
    }
    Ok(())
}

fn cmd_detect(common: Common, gamma_db: Option<f64>) -> Result<(), Error> {
    let mut cfg = load_config(&common.config)?;
    apply_overrides(&mut cfg, &common)?;
    let gamma_db = pick_gamma_db(&cfg, gamma_db)?;
    let trials = if common.trials.is_some() { cfg.trials } else { 100_000 };

    let scenario = &cfg.scenario;
    let mut rng = trial_rng(cfg.seed, 0);
    let realization = sample_realization(scenario, &mut rng);
    let estimate = estimate_reflections(scenario, &realization, &mut rng)?;
    let x = comm_gains(scenario, &realization);

    let gamma_linear = db_to_linear(gamma_db);
    let threshold = match cfg.solver {
        SolverKind::Sc | SolverKind::Cc => 0.0,
        _ => gamma_linear,
    };
    let (alloc, _) = allocate_with(scenario, cfg.solver, &estimate.gamma, &x, threshold)?;
    let sigma = clutter_covariance(&alloc, &estimate.gamma, &scenario.angles, scenario.n_rx);
    let w = mvdr_weights(&sigma, &steering_rx(scenario.angles[0], scenario.n_rx))?;
    let (eta0, eta1) = eta_pair(&alloc, &w, &scenario.angles, scenario.beta_var, scenario.noise_radar);
    let stats = DetectionStats::evaluate(eta0, eta1, scenario.pfa)?;
    let sim = simulate_detection(eta0, eta1, scenario.pfa, trials, &mut rng);

    println!(
        "solver={} gamma={gamma_db:.2} dB  eta0={eta0:.6}  eta1={eta1:.6}  delta={:.6}",
        cfg.solver.as_str(),
        stats.threshold
    );
    println!("analytic : P_FA = {:.6}   P_D = {:.6}", scenario.pfa, stats.pd);
    println!(
        "empirical: P_FA = {:.6}   P_D = {:.6}   ({} trials)",
        sim.empirical_pfa, sim.empirical_pd, sim.trials
    );
    Ok(())
}

fn run() -> Result<(), Error> {
    match Cli::parse().command {
        Command::Allocate { common, gamma_db } => cmd_allocate(common, gamma_db),
        Command::Sweep { common, out } => cmd_sweep(common, out),
        Command::PowerSweep { common, out } => cmd_power_sweep(common, out),
        Command::Detect { common, gamma_db } => cmd_detect(common, gamma_db),
        Command::Render { input, x, y, out } => {
            render_svg(&input, &x, &y, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

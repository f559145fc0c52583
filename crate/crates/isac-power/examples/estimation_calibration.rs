//! MMSE estimator calibration check.
//!
//! Runs the estimation epoch many times with fresh reflections and noise,
//! and compares the empirical per-path squared error of the estimates
//! against the posterior covariance diagonal the estimator reports.
//!
//! ```bash
//! cargo run -p isac-power --example estimation_calibration
//! ```

use isac_power::channel::{sample_realization, trial_rng, Scenario};
use isac_power::sensing::{
    build_estimation_model, mmse_estimate, probe_symbols, synthesize_observation,
};

fn main() {
    let scenario = Scenario {
        n_tx: 16,
        n_rx: 16,
        k_paths: 5,
        angles: [0.0f64, -20.0, -10.0, 10.0, 20.0]
            .iter()
            .map(|d| d.to_radians())
            .collect(),
        rician: 1.0,
        beta_var: 1.0,
        noise_radar: 1.0,
        noise_comm: 1.0,
        power_budget: 100.0,
        snapshots: 32,
        pfa: 0.01,
    };

    let mut rng = trial_rng(42, 0);
    let symbols = probe_symbols(scenario.k_paths, scenario.snapshots, &mut rng);
    let model = build_estimation_model(&scenario, &symbols, scenario.power_budget / 5.0);

    let trials = 20_000;
    let mut mse = [0.0f64; 5];
    let mut predicted = [0.0f64; 5];
    for _ in 0..trials {
        let r = sample_realization(&scenario, &mut rng);
        let y = synthesize_observation(&model, &r.beta, scenario.noise_radar, &mut rng);
        let est = mmse_estimate(&y, &model, scenario.beta_var, scenario.noise_radar)
            .expect("model is well posed");
        for k in 0..5 {
            mse[k] += (est.beta_hat[k] - r.beta[k]).norm_sqr();
            predicted[k] = est.posterior_cov.entry(k, k).re;
        }
    }

    println!("{} trials, N = {} snapshots", trials, scenario.snapshots);
    println!("path   empirical MSE   posterior diag   ratio");
    for k in 0..5 {
        let empirical = mse[k] / trials as f64;
        println!(
            "{k:>4}   {empirical:>13.6}   {:>14.6}   {:>5.3}",
            predicted[k],
            empirical / predicted[k]
        );
    }
}

//! Sensing/communication tradeoff frontier.
//!
//! Sweeps the SCNR threshold for two and five paths, averages rate and
//! detection probability per threshold, writes the raw records plus an
//! aggregate CSV, and renders the frontier (mean P_D against mean rate) as
//! SVG charts.
//!
//! Outputs land in `target/example-output/`.
//!
//! ```bash
//! cargo run -p isac-power --example tradeoff_sweep
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use isac_power::harness::{
    render_svg, summarize_by_gamma, sweep_gamma, write_csv, RunConfig, SolverKind,
};
use isac_power::channel::Scenario;

fn scenario(k: usize) -> Scenario {
    Scenario {
        n_tx: 16,
        n_rx: 16,
        k_paths: k,
        angles: [0.0f64, -20.0, -10.0, 10.0, 20.0][..k]
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
    }
}

fn main() {
    let out_dir = PathBuf::from("target/example-output");
    fs::create_dir_all(&out_dir).expect("create output directory");

    for k in [2usize, 5] {
        let cfg = RunConfig {
            scenario: scenario(k),
            gamma_grid_db: (0..=14).step_by(2).map(f64::from).collect(),
            power_grid_dbm: vec![],
            trials: 400,
            seed: 11,
            solver: SolverKind::Sca,
        };
        let records = sweep_gamma(&cfg).expect("sweep");
        let raw_path = out_dir.join(format!("tradeoff_records_k{k}.csv"));
        write_csv(&records, k, &raw_path).expect("write records");

        let summaries = summarize_by_gamma(&records);
        println!("K = {k}: gamma_db, ok/total, mean rate, mean P_D, mean p0/P_T");
        let mut agg = String::from("gamma_db,mean_rate,mean_pd,mean_p0_frac\n");
        for s in &summaries {
            println!(
                "  {:>5.1}  {:>4}/{:<4}  {:>8.4}  {:>7.4}  {:>7.4}",
                s.gamma_db, s.n_ok, s.n_total, s.mean_rate, s.mean_pd, s.mean_los_fraction
            );
            let _ = writeln!(
                agg,
                "{},{},{},{}",
                s.gamma_db, s.mean_rate, s.mean_pd, s.mean_los_fraction
            );
        }
        let agg_path = out_dir.join(format!("tradeoff_mean_k{k}.csv"));
        fs::write(&agg_path, agg).expect("write aggregate");

        let svg_path = out_dir.join(format!("tradeoff_k{k}.svg"));
        render_svg(&agg_path, "mean_rate", &["mean_pd".to_string()], &svg_path)
            .expect("render frontier");
        println!("  wrote {} and {}", raw_path.display(), svg_path.display());
        println!();
    }
}

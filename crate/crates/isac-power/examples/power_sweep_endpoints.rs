//! Tradeoff endpoints versus the transmit power budget.
//!
//! For each budget on the grid, evaluates the communication-centric rate
//! ceiling and the sensing-centric detection ceiling, writes the records and
//! an aggregate CSV, and renders both trends as SVGs under
//! `target/example-output/`.
//!
//! ```bash
//! cargo run -p isac-power --example power_sweep_endpoints
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use isac_power::channel::Scenario;
use isac_power::harness::{
    render_svg, summarize_by_power, sweep_power, write_csv, RunConfig, SolverKind,
};

fn main() {
    let out_dir = PathBuf::from("target/example-output");
    fs::create_dir_all(&out_dir).expect("create output directory");

    let cfg = RunConfig {
        scenario: Scenario {
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
        },
        gamma_grid_db: vec![],
        power_grid_dbm: vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        trials: 300,
        seed: 23,
        solver: SolverKind::Sca,
    };

    let records = sweep_power(&cfg).expect("power sweep");
    let raw_path = out_dir.join("power_sweep_records.csv");
    write_csv(&records, cfg.scenario.k_paths, &raw_path).expect("write records");

    let summaries = summarize_by_power(&records);
    let mut agg = String::from("pt_dbm,cc_rate,sc_pd\n");
    println!("P_T(dBm)   CC mean rate   SC mean P_D");
    for &pt in &cfg.power_grid_dbm {
        let cc = summaries
            .iter()
            .find(|s| s.pt_dbm == pt && s.solver == SolverKind::Cc)
            .unwrap();
        let sc = summaries
            .iter()
            .find(|s| s.pt_dbm == pt && s.solver == SolverKind::Sc)
            .unwrap();
        println!("{pt:>8.1}   {:>12.4}   {:>11.6}", cc.mean_rate, sc.mean_pd);
        let _ = writeln!(agg, "{pt},{},{}", cc.mean_rate, sc.mean_pd);
    }
    let agg_path = out_dir.join("power_sweep_mean.csv");
    fs::write(&agg_path, agg).expect("write aggregate");

    let rate_svg = out_dir.join("power_sweep_rate.svg");
    render_svg(&agg_path, "pt_dbm", &["cc_rate".to_string()], &rate_svg).expect("render rate");
    let pd_svg = out_dir.join("power_sweep_pd.svg");
    render_svg(&agg_path, "pt_dbm", &["sc_pd".to_string()], &pd_svg).expect("render pd");
    println!();
    println!(
        "wrote {}, {} and {}",
        raw_path.display(),
        rate_svg.display(),
        pd_svg.display()
    );
}

//! Closed-form power split for one LoS plus one NLoS path.
//!
//! Sweeps the SCNR threshold from loose to the feasibility limit and prints
//! how the optimal NLoS share shrinks toward the sensing-centric corner,
//! alongside the SCA solution for the same instances.
//!
//! ```bash
//! cargo run -p isac-power --example closed_form_single_nlos
//! ```

use isac_power::allocate::{
    allocation_objective, max_threshold, sca_allocate, solve_single_nlos, DEFAULT_EPSILON,
    DEFAULT_MAX_ITERS,
};
use isac_power::channel::{rate, Scenario};
use isac_power::core::steering_overlap;

fn main() {
    let scenario = Scenario {
        n_tx: 16,
        n_rx: 16,
        k_paths: 2,
        angles: vec![0.0, (-20.0f64).to_radians()],
        rician: 1.0,
        beta_var: 1.0,
        noise_radar: 1.0,
        noise_comm: 1.0,
        power_budget: 100.0,
        snapshots: 32,
        pfa: 0.01,
    };
    let pt = scenario.power_budget;
    let overlap = steering_overlap(scenario.angles[0], scenario.angles[1], scenario.n_rx);

    // A representative estimated-gain pair and communication gains.
    let gamma = [0.8, 1.1];
    let x = [8f64.sqrt(), 1.9];
    let gamma_max = max_threshold(gamma[0], pt);
    println!("feasibility limit: {gamma_max:.1} (linear), beam overlap b = {overlap:.3e}");
    println!();
    println!("Gamma/Gamma_T   p1(closed)   rate(closed)   p1(SCA)   rate(SCA)   iters");

    for frac in [0.01, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999, 1.0 - 1e-9] {
        let threshold = frac * gamma_max;
        let closed =
            solve_single_nlos(gamma[0], gamma[1], overlap, x[0], x[1], pt, threshold).unwrap();
        let rate_closed = rate(allocation_objective(&closed, &x).powi(2) / scenario.noise_comm);
        let state = sca_allocate(
            &scenario,
            &gamma,
            &x,
            threshold,
            DEFAULT_EPSILON,
            DEFAULT_MAX_ITERS,
        )
        .unwrap();
        let rate_sca = rate(state.objective.powi(2) / scenario.noise_comm);
        println!(
            "{frac:>13.3}   {:>10.4}   {rate_closed:>12.6}   {:>7.4}   {rate_sca:>9.6}   {:>5}",
            closed.get(1),
            state.allocation.get(1),
            state.iterations
        );
    }

    println!();
    println!(
        "an SCNR threshold above the limit is a typed error: {:?}",
        solve_single_nlos(gamma[0], gamma[1], overlap, x[0], x[1], pt, 1.5 * gamma_max).err()
    );
}

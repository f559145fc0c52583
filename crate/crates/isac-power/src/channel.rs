//! Scenario definition, random channel realizations, and the
//! communication-side link budget (gains, SNR, achievable rate).
//!
//! All quantities are linear here; dB/dBm conversion happens at the
//! configuration boundary. Angles are radians internally.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core::{steering_tx, ComplexVec};
use crate::error::{Error, Result};

/// Static problem definition: array geometry, path angles, priors, and
/// budgets. The LoS path is always index 0.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Transmit antennas.
    pub n_tx: usize,
    /// Receive antennas.
    pub n_rx: usize,
    /// Total number of paths including LoS.
    pub k_paths: usize,
    /// Path angles in radians, LoS first.
    pub angles: Vec<f64>,
    /// Rician factor (LoS-to-scatter power ratio).
    pub rician: f64,
    /// Prior variance of the reflection coefficients.
    pub beta_var: f64,
    /// Radar receiver noise power (linear).
    pub noise_radar: f64,
    /// Communication receiver noise power (linear).
    pub noise_comm: f64,
    /// Total transmit power budget (linear).
    pub power_budget: f64,
    /// Snapshots used by the estimation epoch.
    pub snapshots: usize,
    /// Tolerated probability of false alarm.
    pub pfa: f64,
}

impl Scenario {
    /// Checks the documented invariants; solvers assume they hold.
    pub fn validate(&self) -> Result<()> {
        if self.n_tx < 1 || self.n_rx < 1 {
            return Err(Error::Invalid("antenna counts must be at least 1".into()));
        }
        if self.k_paths < 1 {
            return Err(Error::Invalid("k_paths must be at least 1".into()));
        }
        if self.angles.len() != self.k_paths {
            return Err(Error::Invalid(format!(
                "expected {} angles, got {}",
                self.k_paths,
                self.angles.len()
            )));
        }
        for (i, a) in self.angles.iter().enumerate() {
            if !a.is_finite() || !(-FRAC_PI_2..=FRAC_PI_2).contains(a) {
                return Err(Error::Invalid(format!(
                    "angle {i} = {a} outside [-pi/2, pi/2]"
                )));
            }
        }
        for i in 0..self.angles.len() {
            for j in (i + 1)..self.angles.len() {
                if self.angles[i] == self.angles[j] {
                    return Err(Error::Invalid(format!(
                        "angles {i} and {j} coincide ({})",
                        self.angles[i]
                    )));
                }
            }
        }
        if self.rician < 0.0 || !self.rician.is_finite() {
            return Err(Error::Invalid("rician factor must be finite and >= 0".into()));
        }
        for (name, v) in [
            ("beta_var", self.beta_var),
            ("noise_radar", self.noise_radar),
            ("noise_comm", self.noise_comm),
            ("power_budget", self.power_budget),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Invalid(format!("{name} must be finite and > 0")));
            }
        }
        if self.snapshots < 1 {
            return Err(Error::Invalid("snapshots must be at least 1".into()));
        }
        if !(self.pfa > 0.0 && self.pfa < 1.0) {
            return Err(Error::Invalid("pfa must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// One random draw of the propagation state: reflection coefficients for all
/// K paths and complex gains for the K-1 NLoS paths.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Reflection coefficients, `beta[k] ~ CN(0, beta_var)`.
    pub beta: Vec<Complex64>,
    /// NLoS path gains, `alpha[k] ~ CN(0, 1)` (length K-1).
    pub alpha: Vec<Complex64>,
}

/// Nonnegative per-path transmit powers summing to the budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    p: Vec<f64>,
}

impl PowerAllocation {
    /// Wraps a power vector, enforcing nonnegativity and that the total
    /// matches `budget` to a relative 1e-9.
    pub fn new(p: Vec<f64>, budget: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Invalid("allocation must be nonempty".into()));
        }
        if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid(
                "allocation entries must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = p.iter().sum();
        let tol = 1e-9 * budget.abs() + 1e-15;
        if (total - budget).abs() > tol {
            return Err(Error::Invalid(format!(
                "allocation sums to {total}, budget is {budget}"
            )));
        }
        Ok(Self { p })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.p[k]
    }

    /// Power on the LoS path.
    pub fn los(&self) -> f64 {
        self.p[0]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// NLoS powers `p[1..]`.
    pub fn nlos(&self) -> &[f64] {
        &self.p[1..]
    }
}

/// Deterministic per-trial random stream: all trials share the seed and get
/// independent ChaCha streams, so results do not depend on execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn complex_gaussian(var: f64, rng: &mut impl Rng) -> Complex64 {
    // CN(0, var): independent real/imag parts with variance var/2 each.
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws one channel realization: `beta[k] ~ CN(0, beta_var)` iid over all
/// paths, then `alpha[k] ~ CN(0, 1)` iid over NLoS paths.
pub fn sample_realization(scenario: &Scenario, rng: &mut impl Rng) -> ChannelRealization {
    let beta = (0..scenario.k_paths)
        .map(|_| complex_gaussian(scenario.beta_var, rng))
        .collect();
    let alpha = (0..scenario.k_paths.saturating_sub(1))
        .map(|_| complex_gaussian(1.0, rng))
        .collect();
    ChannelRealization { beta, alpha }
}

/// Per-path communication amplitude gains `x`:
/// `x0 = sqrt(N_T ρ / (1+ρ))` for the LoS path and
/// `x_k = sqrt(N_T / ((K-1)(1+ρ))) · |alpha_k|` for each NLoS path.
pub fn comm_gains(scenario: &Scenario, realization: &ChannelRealization) -> Vec<f64> {
    let nt = scenario.n_tx as f64;
    let rho = scenario.rician;
    let k = scenario.k_paths;
    let mut x = Vec::with_capacity(k);
    x.push((nt * rho / (1.0 + rho)).sqrt());
    if k > 1 {
        let scale = (nt / ((k - 1) as f64 * (1.0 + rho))).sqrt();
        for a in &realization.alpha {
            x.push(scale * a.norm());
        }
    }
    x
}

/// Per-path complex channel coefficients, shared by [`assemble_channel`] and
/// the phase-compensation cross-check.
pub(crate) fn path_coefficients(
    scenario: &Scenario,
    realization: &ChannelRealization,
    p: &PowerAllocation,
) -> Vec<Complex64> {
    let nt = scenario.n_tx as f64;
    let rho = scenario.rician;
    let k = scenario.k_paths;
    let mut coef = Vec::with_capacity(k);
    let los = (rho / (1.0 + rho)).sqrt() * p.get(0).sqrt() * nt.sqrt();
    coef.push(Complex64::new(los, 0.0));
    if k > 1 {
        let scale = (1.0 / (1.0 + rho)).sqrt() * (nt / (k - 1) as f64).sqrt();
        for (pk, a) in p.as_slice()[1..].iter().zip(realization.alpha.iter()) {
            coef.push(scale * pk.sqrt() * a);
        }
    }
    coef
}

/// Rician MISO channel vector
/// `h = sqrt(ρ/(1+ρ)) h_LoS + sqrt(1/(1+ρ)) h_NLoS`, with the per-path
/// transmit powers folded into the components.
pub fn assemble_channel(
    scenario: &Scenario,
    realization: &ChannelRealization,
    p: &PowerAllocation,
) -> ComplexVec {
    debug_assert_eq!(p.len(), scenario.k_paths);
    let coef = path_coefficients(scenario, realization, p);
    let mut h = vec![Complex64::ZERO; scenario.n_tx];
    for (k, c) in coef.iter().enumerate() {
        let a = steering_tx(scenario.angles[k], scenario.n_tx);
        for (hi, ai) in h.iter_mut().zip(a.iter()) {
            *hi += c * ai;
        }
    }
    ComplexVec::new(h).expect("n_tx >= 1 yields a nonempty vector")
}

/// Received SNR after per-path phase compensation:
/// `(Σ_k sqrt(p_k) x_k)² / noise_comm`.
pub fn snr_from_gains(p: &PowerAllocation, x: &[f64], noise_comm: f64) -> f64 {
    debug_assert_eq!(p.len(), x.len());
    let amplitude: f64 = p
        .as_slice()
        .iter()
        .zip(x.iter())
        .map(|(pk, xk)| pk.sqrt() * xk)
        .sum();
    amplitude * amplitude / noise_comm
}

/// Achievable rate in bits/s/Hz.
///
/// ```
/// assert_eq!(isac_power::channel::rate(3.0), 2.0);
/// ```
pub fn rate(snr: f64) -> f64 {
    debug_assert!(snr >= 0.0);
    (1.0 + snr).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{hpd_inverse, HermitianMatrix};
    use rand::Rng;

    pub(crate) fn test_scenario(k: usize, angles_deg: &[f64]) -> Scenario {
        Scenario {
            n_tx: 16,
            n_rx: 16,
            k_paths: k,
            angles: angles_deg.iter().map(|d| d.to_radians()).collect(),
            rician: 1.0,
            beta_var: 1.0,
            noise_radar: 1.0,
            noise_comm: 1.0,
            power_budget: 100.0,
            snapshots: 32,
            pfa: 0.01,
        }
    }

    fn random_allocation(k: usize, budget: f64, rng: &mut impl Rng) -> PowerAllocation {
        // Dirichlet-style split via exponentials.
        let draws: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
        let total: f64 = draws.iter().sum();
        PowerAllocation::new(draws.iter().map(|d| budget * d / total).collect(), budget).unwrap()
    }

    #[test]
    fn scenario_validation_catches_errors() {
        let mut s = test_scenario(2, &[0.0, -20.0]);
        assert!(s.validate().is_ok());
        s.pfa = 1.5;
        assert!(s.validate().is_err());
        s.pfa = 0.01;
        s.angles[1] = s.angles[0];
        assert!(s.validate().is_err());
        s.angles[1] = 2.0; // > pi/2
        assert!(s.validate().is_err());
    }

    #[test]
    fn same_seed_reproduces_realization() {
        let s = test_scenario(5, &[0.0, -20.0, -10.0, 10.0, 20.0]);
        let a = sample_realization(&s, &mut trial_rng(9, 3));
        let b = sample_realization(&s, &mut trial_rng(9, 3));
        assert_eq!(a.beta, b.beta);
        assert_eq!(a.alpha, b.alpha);
        let c = sample_realization(&s, &mut trial_rng(9, 4));
        assert_ne!(a.beta, c.beta);
    }

    #[test]
    fn beta_second_moment_matches_prior() {
        let s = test_scenario(2, &[0.0, -20.0]);
        let mut rng = trial_rng(17, 0);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let r = sample_realization(&s, &mut rng);
            acc += r.beta[0].norm_sqr();
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "E|beta|^2 = {mean}");
    }

    #[test]
    fn alpha_mean_is_zero() {
        let s = test_scenario(2, &[0.0, -20.0]);
        let mut rng = trial_rng(23, 0);
        let n = 100_000;
        let mut acc = Complex64::ZERO;
        for _ in 0..n {
            let r = sample_realization(&s, &mut rng);
            acc += r.alpha[0];
        }
        let mean = acc / n as f64;
        assert!(mean.re.abs() < 0.02 && mean.im.abs() < 0.02);
    }

    #[test]
    fn comm_gain_los_value() {
        // N_T = 16, rho = 1 -> x0 = sqrt(8).
        let s = test_scenario(2, &[0.0, -20.0]);
        let r = ChannelRealization {
            beta: vec![Complex64::ONE; 2],
            alpha: vec![Complex64::ZERO],
        };
        let x = comm_gains(&s, &r);
        assert!((x[0] - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn comm_gain_single_nlos_unit_alpha() {
        let mut s = test_scenario(2, &[0.0, -20.0]);
        s.n_tx = 4;
        let r = ChannelRealization {
            beta: vec![Complex64::ONE; 2],
            alpha: vec![Complex64::ONE],
        };
        let x = comm_gains(&s, &r);
        // x1 = sqrt(4 / (1 * 2)) = sqrt(2).
        assert!((x[1] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nlos_gain_energy_independent_of_k() {
        // Sum over NLoS paths of E[x_k^2] = N_T / (1 + rho) for any K.
        for k in [2usize, 3, 5] {
            let angles: Vec<f64> = (0..k).map(|i| -30.0 + 12.0 * i as f64).collect();
            let s = test_scenario(k, &angles);
            let mut rng = trial_rng(31, k as u64);
            let n = 40_000;
            let mut acc = 0.0;
            for _ in 0..n {
                let r = sample_realization(&s, &mut rng);
                let x = comm_gains(&s, &r);
                acc += x[1..].iter().map(|v| v * v).sum::<f64>();
            }
            let mean = acc / n as f64;
            let expected = s.n_tx as f64 / (1.0 + s.rician);
            assert!(
                (mean - expected).abs() < 0.02 * expected,
                "K={k}: {mean} vs {expected}"
            );
        }
    }

    #[test]
    fn los_only_limit_recovers_los_component() {
        let mut s = test_scenario(1, &[0.0]);
        s.rician = 1e9;
        let r = ChannelRealization {
            beta: vec![Complex64::ONE],
            alpha: vec![],
        };
        let p = PowerAllocation::new(vec![s.power_budget], s.power_budget).unwrap();
        let h = assemble_channel(&s, &r, &p);
        let a = steering_tx(0.0, s.n_tx);
        let amp = s.power_budget.sqrt() * (s.n_tx as f64).sqrt();
        for i in 0..s.n_tx {
            assert!((h[i] - amp * a[i]).norm() < 1e-4 * amp);
        }
    }

    #[test]
    fn zero_power_gives_zero_channel() {
        let s = test_scenario(3, &[0.0, -20.0, 20.0]);
        let r = sample_realization(&s, &mut trial_rng(1, 0));
        let p = PowerAllocation::new(vec![0.0; 3], 0.0).unwrap();
        let h = assemble_channel(&s, &r, &p);
        assert!(h.norm() < 1e-15);
    }

    /// Phase compensation cross-check: assemble the N_T-dimensional channel,
    /// recover the per-path coefficients by least squares against the
    /// steering basis (the beamformer column space), rotate each by the
    /// compensating phase, and compare `|hᴴFs|²/σ²` against
    /// [`snr_from_gains`].
    #[test]
    fn compensated_channel_output_matches_gain_form() {
        let s = test_scenario(3, &[0.0, -20.0, 20.0]);
        let mut rng = trial_rng(77, 0);
        for _ in 0..50 {
            let r = sample_realization(&s, &mut rng);
            let p = random_allocation(3, s.power_budget, &mut rng);
            let symbols: Vec<Complex64> = (0..3)
                .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();

            let h = assemble_channel(&s, &r, &p);

            // Least-squares coefficients c = (AᴴA)⁻¹ Aᴴ h.
            let basis: Vec<_> = s
                .angles
                .iter()
                .map(|&t| steering_tx(t, s.n_tx))
                .collect();
            let k = basis.len();
            let mut gram = Vec::with_capacity(k * k);
            for bi in &basis {
                for bj in &basis {
                    gram.push(bi.herm_dot(bj));
                }
            }
            // Symmetrize tiny fp asymmetry before the Hermitian check.
            let mut gram_sym = gram.clone();
            for i in 0..k {
                for j in 0..k {
                    gram_sym[i * k + j] = 0.5 * (gram[i * k + j] + gram[j * k + i].conj());
                }
            }
            let gram = HermitianMatrix::from_entries(k, gram_sym).unwrap();
            let rhs: Vec<Complex64> = basis.iter().map(|b| b.herm_dot(&h)).collect();
            let ginv = hpd_inverse(&gram).unwrap();
            let coef: Vec<Complex64> = (0..k)
                .map(|i| (0..k).map(|j| ginv.entry(i, j) * rhs[j]).sum())
                .collect();

            // y = hᴴ F s with F = A (AᴴA)⁻¹ diag(e^{-j g_k}):
            // y = Σ_k conj(c_k) e^{-j g_k} s_k, where g_0 = arg(s_0) and
            // g_k = arg(s_k alpha_k*) makes every term real nonnegative.
            let mut y = Complex64::ZERO;
            for kk in 0..k {
                let g = if kk == 0 {
                    symbols[0].arg()
                } else {
                    (symbols[kk] * r.alpha[kk - 1].conj()).arg()
                };
                y += coef[kk].conj() * Complex64::from_polar(1.0, -g) * symbols[kk];
            }

            let snr_direct = y.norm_sqr() / s.noise_comm;
            let x = comm_gains(&s, &r);
            let snr_gains = snr_from_gains(&p, &x, s.noise_comm);
            let scale = snr_gains.max(1e-300);
            assert!(
                ((snr_direct - snr_gains) / scale).abs() < 1e-10,
                "direct {snr_direct} vs gains {snr_gains}"
            );
        }
    }

    #[test]
    fn snr_special_cases() {
        let pt = 100.0;
        let x = vec![2.0, 1.0];
        let p = PowerAllocation::new(vec![pt, 0.0], pt).unwrap();
        assert!((snr_from_gains(&p, &x, 1.0) - pt * 4.0).abs() < 1e-9);

        let zero_x = vec![0.0, 0.0];
        let p2 = PowerAllocation::new(vec![40.0, 60.0], pt).unwrap();
        assert_eq!(snr_from_gains(&p2, &zero_x, 1.0), 0.0);
    }

    #[test]
    fn cauchy_schwarz_allocation_snr() {
        // p_k proportional to x_k^2 achieves P_T Σ x^2 / σ².
        let pt = 100.0;
        let x = vec![2.0, 0.5, 1.5];
        let sum_sq: f64 = x.iter().map(|v| v * v).sum();
        let p = PowerAllocation::new(x.iter().map(|v| pt * v * v / sum_sq).collect(), pt).unwrap();
        let snr = snr_from_gains(&p, &x, 1.0);
        assert!((snr - pt * sum_sq).abs() < 1e-9 * pt * sum_sq);
    }

    #[test]
    fn rate_reference_points() {
        assert_eq!(rate(0.0), 0.0);
        assert!((rate(1.0) - 1.0).abs() < 1e-15);
        assert!((rate(3.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn snr_monotone_in_each_path_power() {
        let mut rng = trial_rng(101, 0);
        for _ in 0..200 {
            let k = rng.gen_range(1usize..6);
            let x: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..3.0)).collect();
            let p_raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..50.0)).collect();
            let total: f64 = p_raw.iter().sum();
            let base = PowerAllocation::new(p_raw.clone(), total).unwrap();
            let snr0 = snr_from_gains(&base, &x, 1.0);
            let idx = rng.gen_range(0..k);
            let mut bumped = p_raw.clone();
            bumped[idx] += 5.0;
            let bumped = PowerAllocation::new(bumped, total + 5.0).unwrap();
            assert!(snr_from_gains(&bumped, &x, 1.0) >= snr0 - 1e-12);
        }
    }

    #[test]
    fn allocation_constructor_enforces_invariants() {
        assert!(PowerAllocation::new(vec![50.0, 50.0], 100.0).is_ok());
        assert!(PowerAllocation::new(vec![50.0, 49.0], 100.0).is_err());
        assert!(PowerAllocation::new(vec![-1.0, 101.0], 100.0).is_err());
        assert!(PowerAllocation::new(vec![], 0.0).is_err());
    }
}

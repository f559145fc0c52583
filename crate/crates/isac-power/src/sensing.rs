//! Radar-side processing: MVDR receive beamforming, SCNR evaluation, MMSE
//! estimation of the path reflection coefficients, and Neyman-Pearson target
//! detection.
//!
//! The detection statistics use the closed-form exponential expressions of
//! the 2-DoF chi-square distribution; tests validate them against a numeric
//! CDF oracle.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{PowerAllocation, Scenario};
use crate::core::{regularized_inverse, steering_rx, Cholesky, ComplexVec, HermitianMatrix};
use crate::error::{Error, Result};

/// MMSE estimate of the reflection coefficients together with the derived
/// normalized gains and the posterior covariance.
#[derive(Debug, Clone)]
pub struct EstimationResult {
    /// Estimated reflection coefficients, one per path.
    pub beta_hat: Vec<Complex64>,
    /// Normalized gains `gamma[k] = |beta_hat[k]|² / noise_radar`.
    pub gamma: Vec<f64>,
    /// Posterior covariance of the estimation error (K×K).
    pub posterior_cov: HermitianMatrix,
}

/// Hypothesis-test statistics for one allocation and beamformer.
#[derive(Debug, Clone, Copy)]
pub struct DetectionStats {
    /// Test-statistic scale under H0 (target absent).
    pub eta0: f64,
    /// Test-statistic scale under H1 (target present).
    pub eta1: f64,
    /// Decision threshold meeting the false-alarm budget.
    pub threshold: f64,
    /// Probability of correct detection.
    pub pd: f64,
}

impl DetectionStats {
    pub fn evaluate(eta0: f64, eta1: f64, pfa: f64) -> Result<Self> {
        let scales_ordered = eta0 > 0.0 && eta1 >= eta0;
        if !scales_ordered {
            return Err(Error::Invalid(format!(
                "detection scales must satisfy 0 < eta0 <= eta1 (got {eta0}, {eta1})"
            )));
        }
        if !(pfa > 0.0 && pfa < 1.0) {
            return Err(Error::Invalid("pfa must lie in (0, 1)".into()));
        }
        Ok(Self {
            eta0,
            eta1,
            threshold: detection_threshold(eta0, pfa),
            pd: prob_detection(eta0, eta1, pfa),
        })
    }
}

/// Empirical false-alarm and detection rates from a Monte Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct DetectionSim {
    pub trials: usize,
    pub empirical_pfa: f64,
    pub empirical_pd: f64,
}

/// Clutter covariance `Σ = Σ_{k>=1} p_k γ_k b(θ_k) bᴴ(θ_k)` (the LoS entry
/// of `p`/`gamma` is ignored).
pub fn clutter_covariance(
    p: &PowerAllocation,
    gamma: &[f64],
    angles: &[f64],
    n_rx: usize,
) -> HermitianMatrix {
    debug_assert_eq!(p.len(), gamma.len());
    debug_assert_eq!(p.len(), angles.len());
    let mut sigma = HermitianMatrix::zeros(n_rx);
    for k in 1..p.len() {
        let w = p.get(k) * gamma[k];
        if w > 0.0 {
            sigma.add_scaled_outer(w, &steering_rx(angles[k], n_rx));
        }
    }
    sigma
}

/// MVDR weights `w = (Σ+I)⁻¹ b0 / (b0ᴴ (Σ+I)⁻¹ b0)`; distortionless toward
/// the target (`wᴴ b0 = 1`).
pub fn mvdr_weights(sigma: &HermitianMatrix, b0: &ComplexVec) -> Result<ComplexVec> {
    let inv = regularized_inverse(sigma)?;
    let mb0 = inv.mul_vec(b0);
    let denom = b0.herm_dot(&mb0).re;
    Ok(mb0.scaled(Complex64::new(1.0 / denom, 0.0)))
}

/// Output SCNR for an arbitrary beamformer `w`:
/// `p0 β0² |wᴴb0|² / (Σ_{k>=1} p_k β_k² |wᴴb_k|² + ‖w‖² σ_R²)`,
/// where `beta_sq[k]` holds `|β_k|²`.
pub fn scnr_with_weights(
    w: &ComplexVec,
    p: &PowerAllocation,
    beta_sq: &[f64],
    angles: &[f64],
    noise_radar: f64,
) -> f64 {
    debug_assert_eq!(p.len(), beta_sq.len());
    debug_assert_eq!(p.len(), angles.len());
    let n_rx = w.len();
    let gains: Vec<f64> = angles
        .iter()
        .map(|&t| w.herm_dot(&steering_rx(t, n_rx)).norm_sqr())
        .collect();
    let signal = p.get(0) * beta_sq[0] * gains[0];
    let mut clutter = 0.0;
    for k in 1..p.len() {
        clutter += p.get(k) * beta_sq[k] * gains[k];
    }
    signal / (clutter + w.norm_sq() * noise_radar)
}

/// Maximum achievable SCNR under MVDR beamforming:
/// `p0 γ0 · b0ᴴ (Σ + I)⁻¹ b0` with `Σ` built from the supplied gains.
pub fn max_scnr(p: &PowerAllocation, gamma: &[f64], angles: &[f64], n_rx: usize) -> Result<f64> {
    let sigma = clutter_covariance(p, gamma, angles, n_rx);
    let inv = regularized_inverse(&sigma)?;
    let b0 = steering_rx(angles[0], n_rx);
    Ok(p.get(0) * gamma[0] * inv.quad_form(&b0))
}

/// Stacked linear observation model for the estimation epoch. Column `k`
/// holds `sqrt(p) s_k[n] b(θ_k)` for every snapshot `n`.
#[derive(Debug, Clone)]
pub struct EstimationModel {
    pub k_paths: usize,
    pub snapshots: usize,
    pub n_rx: usize,
    // Column-major: data[k * rows + r].
    data: Vec<Complex64>,
}

impl EstimationModel {
    pub fn rows(&self) -> usize {
        self.snapshots * self.n_rx
    }

    pub fn column(&self, k: usize) -> &[Complex64] {
        let rows = self.rows();
        &self.data[k * rows..(k + 1) * rows]
    }

    /// Gram matrix `HᴴH` (K×K).
    pub fn gram(&self) -> HermitianMatrix {
        let k = self.k_paths;
        let mut entries = vec![Complex64::ZERO; k * k];
        for i in 0..k {
            for j in i..k {
                let s: Complex64 = self
                    .column(i)
                    .iter()
                    .zip(self.column(j).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let s = if i == j { Complex64::new(s.re, 0.0) } else { s };
                entries[i * k + j] = s;
                entries[j * k + i] = s.conj();
            }
        }
        HermitianMatrix::from_entries(k, entries).expect("gram matrix is Hermitian")
    }

    /// `y = H β` (noise free).
    pub fn apply(&self, beta: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(beta.len(), self.k_paths);
        let rows = self.rows();
        let mut y = vec![Complex64::ZERO; rows];
        for (k, bk) in beta.iter().enumerate() {
            for (yi, hik) in y.iter_mut().zip(self.column(k).iter()) {
                *yi += bk * hik;
            }
        }
        y
    }

    /// `Hᴴ y`.
    pub fn adjoint_apply(&self, y: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(y.len(), self.rows());
        (0..self.k_paths)
            .map(|k| {
                self.column(k)
                    .iter()
                    .zip(y.iter())
                    .map(|(h, yi)| h.conj() * yi)
                    .sum()
            })
            .collect()
    }
}

/// Unit-modulus probe symbols with iid uniform random phases, stored
/// path-major: `symbols[k * snapshots + n]`.
pub fn probe_symbols(k_paths: usize, snapshots: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..k_paths * snapshots)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Builds the stacked estimation model from unit-power probe symbols and the
/// uniform probing power `p_uniform` (typically `P_T / K`).
pub fn build_estimation_model(
    scenario: &Scenario,
    symbols: &[Complex64],
    p_uniform: f64,
) -> EstimationModel {
    let k = scenario.k_paths;
    let n = scenario.snapshots;
    let n_rx = scenario.n_rx;
    debug_assert_eq!(symbols.len(), k * n);
    let sqrt_p = p_uniform.sqrt();
    let rows = n * n_rx;
    let mut data = vec![Complex64::ZERO; k * rows];
    for kk in 0..k {
        let b = steering_rx(scenario.angles[kk], n_rx);
        let col = &mut data[kk * rows..(kk + 1) * rows];
        for nn in 0..n {
            let s = sqrt_p * symbols[kk * n + nn];
            for (i, bi) in b.iter().enumerate() {
                col[nn * n_rx + i] = s * bi;
            }
        }
    }
    EstimationModel {
        k_paths: k,
        snapshots: n,
        n_rx,
        data,
    }
}

/// Draws `y = H β + z` with `z ~ CN(0, noise_radar I)`.
pub fn synthesize_observation(
    model: &EstimationModel,
    beta: &[Complex64],
    noise_radar: f64,
    rng: &mut impl Rng,
) -> Vec<Complex64> {
    let s = (noise_radar / 2.0).sqrt();
    let mut y = model.apply(beta);
    for yi in y.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *yi += Complex64::new(s * re, s * im);
    }
    y
}

/// MMSE estimator `β̂ = (σ_R²/σ² I + HᴴH)⁻¹ Hᴴ y` with posterior covariance
/// `(I/σ² + HᴴH/σ_R²)⁻¹`.
pub fn mmse_estimate(
    y: &[Complex64],
    model: &EstimationModel,
    beta_var: f64,
    noise_radar: f64,
) -> Result<EstimationResult> {
    let k = model.k_paths;
    let ratio = noise_radar / beta_var;
    // Assemble (ratio I + HᴴH) explicitly.
    let gram = model.gram();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut e = gram.entry(i, j);
            if i == j {
                e += ratio;
            }
            entries.push(e);
        }
    }
    let m = HermitianMatrix::from_entries(k, entries).expect("shifted gram stays Hermitian");
    let chol = Cholesky::factor(&m)?;
    let beta_hat = chol.solve(&model.adjoint_apply(y));
    // (I/σ² + HᴴH/σ_R²)⁻¹ = σ_R² (σ_R²/σ² I + HᴴH)⁻¹.
    let posterior_cov = chol.inverse().scaled(noise_radar);
    let gamma = beta_hat.iter().map(|b| b.norm_sqr() / noise_radar).collect();
    Ok(EstimationResult {
        beta_hat,
        gamma,
        posterior_cov,
    })
}

/// Noise-plus-clutter scales of the matched-filter statistic:
/// `eta0 = Σ_{k>=1} p_k |wᴴ b_k|² σ² + ‖w‖² σ_R²` and
/// `eta1 = eta0 + p0 |wᴴ b0|² σ²`.
pub fn eta_pair(
    p: &PowerAllocation,
    w: &ComplexVec,
    angles: &[f64],
    beta_var: f64,
    noise_radar: f64,
) -> (f64, f64) {
    debug_assert_eq!(p.len(), angles.len());
    let n_rx = w.len();
    let gains: Vec<f64> = angles
        .iter()
        .map(|&t| w.herm_dot(&steering_rx(t, n_rx)).norm_sqr())
        .collect();
    let mut eta0 = w.norm_sq() * noise_radar;
    for (pk, gk) in p.as_slice().iter().zip(gains.iter()).skip(1) {
        eta0 += pk * gk * beta_var;
    }
    let eta1 = eta0 + p.get(0) * gains[0] * beta_var;
    (eta0, eta1)
}

/// Neyman-Pearson threshold `δ = -eta0 · ln(pfa)`, the closed form of
/// `(eta0/2) F⁻¹_{χ²₂}(1 - pfa)`.
pub fn detection_threshold(eta0: f64, pfa: f64) -> f64 {
    debug_assert!(pfa > 0.0 && pfa < 1.0);
    -eta0 * pfa.ln()
}

/// Probability of detection `P_D = pfa^{eta0/eta1}`, the closed form of
/// `1 - F_{χ²₂}((eta0/eta1) F⁻¹_{χ²₂}(1 - pfa))`; decreasing in `eta0/eta1`.
pub fn prob_detection(eta0: f64, eta1: f64, pfa: f64) -> f64 {
    debug_assert!(eta1 >= eta0 && eta0 > 0.0);
    pfa.powf(eta0 / eta1)
}

/// Monte Carlo check of the detector: draws the test statistic directly from
/// its H0/H1 distributions and thresholds it.
pub fn simulate_detection(
    eta0: f64,
    eta1: f64,
    pfa: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> DetectionSim {
    assert!(trials >= 1);
    let delta = detection_threshold(eta0, pfa);
    let draw = |scale: f64, rng: &mut dyn rand::RngCore| -> f64 {
        let s = (scale / 2.0).sqrt();
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let y = Complex64::new(s * re, s * im);
        y.norm_sqr()
    };
    let mut false_alarms = 0usize;
    let mut detections = 0usize;
    for _ in 0..trials {
        if draw(eta0, rng) > delta {
            false_alarms += 1;
        }
        if draw(eta1, rng) > delta {
            detections += 1;
        }
    }
    DetectionSim {
        trials,
        empirical_pfa: false_alarms as f64 / trials as f64,
        empirical_pd: detections as f64 / trials as f64,
    }
}

//! Power-allocation solvers.
//!
//! Three routes to an allocation under the radar SCNR constraint:
//! a closed form for the single-NLoS case, successive convex approximation
//! (SCA) for the general case, and the sensing-centric / communication-centric
//! corner designs used as baselines.
//!
//! The SCA subproblem (maximize `Σ √p_k x_k` over the simplex intersected
//! with one concave inequality) is solved by a purpose-built logarithmic
//! barrier with damped Newton steps; the problem dimension is the path count,
//! so each step is a Sherman-Morrison solve.

use crate::channel::{PowerAllocation, Scenario};
use crate::core::{regularized_inverse, steering_rx};
use crate::error::{Error, Result};
use crate::sensing::clutter_covariance;

/// Stopping tolerance on the SCA objective increase.
pub const DEFAULT_EPSILON: f64 = 1e-5;
/// Iteration cap for the SCA loop.
pub const DEFAULT_MAX_ITERS: usize = 100;

// Barrier solver internals (all in budget-normalized units).
const BARRIER_MU: f64 = 20.0;
const BARRIER_T0: f64 = 1.0;
// Tighter gaps push the path parameter so high that the constraint slack
// loses relative precision, which poisons the implied multipliers.
const GAP_REL: f64 = 1e-8;
const MAX_NEWTON: usize = 60;
const MAX_OUTER: usize = 60;
/// Internal floor on normalized powers.
const POWER_FLOOR: f64 = 1e-12;
/// Normalized powers below this snap to exactly zero on output.
const SNAP_BELOW: f64 = 1e-9;

/// Coefficients of the feasibility quadratic `h(p1) = A p1² + B p1 + C`
/// whose nonpositive set is exactly the single-NLoS SCNR-feasible region.
#[derive(Debug, Clone, Copy)]
pub struct QuadCoeffs {
    pub a: f64,
    pub b_lin: f64,
    pub c: f64,
    /// Beam overlap `|b(θ0)ᴴ b(θ1)|²` that produced these coefficients.
    pub overlap: f64,
}

/// Affine lower bound of the beampattern-loss function `g` at a reference
/// point, used by one SCA iteration.
#[derive(Debug, Clone)]
pub struct Linearization {
    /// `g` evaluated at the reference NLoS powers.
    pub g_at_ref: f64,
    /// Gradient of `g` at the reference (length K-1, entries <= 0).
    pub gradient: Vec<f64>,
    /// Reference NLoS powers (length K-1).
    pub ref_point: Vec<f64>,
}

/// Subproblem output with solver diagnostics.
#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub allocation: PowerAllocation,
    /// `Σ √p_k x_k` at the returned allocation.
    pub objective: f64,
    /// Stationarity residual of the KKT system, relative to the objective
    /// gradient scale.
    pub kkt_residual: f64,
    /// Total damped Newton steps across the barrier path.
    pub newton_iterations: usize,
}

/// Final state of the SCA loop.
#[derive(Debug, Clone)]
pub struct ScaState {
    /// Accepted allocation (feasible for the true SCNR constraint).
    pub allocation: PowerAllocation,
    /// `Σ √p_k x_k` at the accepted allocation.
    pub objective: f64,
    /// Subproblem solves performed.
    pub iterations: usize,
    /// True when the loop stopped on the objective-increase test rather than
    /// the iteration cap.
    pub converged: bool,
    /// Objective value of every accepted iterate, in order (nondecreasing).
    pub objective_trace: Vec<f64>,
}

/// Objective `Σ √p_k x_k` shared by every solver.
pub fn allocation_objective(p: &PowerAllocation, x: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), x.len());
    p.as_slice()
        .iter()
        .zip(x.iter())
        .map(|(pk, xk)| pk.sqrt() * xk)
        .sum()
}

/// Maximum feasible SCNR threshold `Γ_T = P_T γ0`, reached by the
/// sensing-centric allocation.
pub fn max_threshold(gamma0: f64, power_budget: f64) -> f64 {
    gamma0 * power_budget
}

/// Quadratic coefficients of the single-NLoS feasibility constraint:
/// `A = (1-b) γ0 γ1`, `B = Γ γ1 + γ0 + P_T (b-1) γ0 γ1`, `C = Γ - P_T γ0`,
/// with `b` the beam overlap. `h(p1) <= 0` iff the SCNR constraint holds at
/// `(P_T - p1, p1)`.
pub fn quad_coeffs(
    gamma0: f64,
    gamma1: f64,
    overlap: f64,
    power_budget: f64,
    gamma_threshold: f64,
) -> QuadCoeffs {
    let b = overlap.clamp(0.0, 1.0);
    QuadCoeffs {
        a: (1.0 - b) * gamma0 * gamma1,
        b_lin: gamma_threshold * gamma1 + gamma0 + power_budget * (b - 1.0) * gamma0 * gamma1,
        c: gamma_threshold - power_budget * gamma0,
        overlap: b,
    }
}

/// Largest NLoS power `P_A` in `[0, P_T]` with `h(P_A) <= 0`; the positive
/// root of the quadratic, clipped to the budget. Fails when `c > 0`, i.e.
/// the threshold exceeds `Γ_T` and not even `p1 = 0` is feasible.
pub fn feasible_upper(coeffs: &QuadCoeffs, power_budget: f64) -> Result<f64> {
    let QuadCoeffs { a, b_lin: b, c, .. } = *coeffs;
    if c > 0.0 {
        return Err(Error::InfeasibleThreshold { margin: c });
    }
    let root = if a > 0.0 {
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let sd = disc.sqrt();
        if b >= 0.0 {
            // With c <= 0 the roots straddle zero; this form avoids
            // cancellation when 4ac is small against b².
            let denom = b + sd;
            if denom > 0.0 {
                -2.0 * c / denom
            } else {
                0.0
            }
        } else {
            (-b + sd) / (2.0 * a)
        }
    } else if b > 0.0 {
        -c / b
    } else {
        // Degenerate linear constraint that never tightens: h(0) <= 0 and h
        // is nonincreasing, so the whole budget range is feasible.
        power_budget
    };
    Ok(root.clamp(0.0, power_budget))
}

/// Unconstrained maximizer `P_B = P_T x1² / (x0² + x1²)` of
/// `f(p1) = sqrt(P_T - p1) x0 + sqrt(p1) x1`.
pub fn cc_extreme(x0: f64, x1: f64, power_budget: f64) -> f64 {
    let denom = x0 * x0 + x1 * x1;
    debug_assert!(denom > 0.0, "at least one gain must be positive");
    power_budget * x1 * x1 / denom
}

/// Closed-form optimal allocation for one LoS plus one NLoS path: evaluate
/// the objective at `min{P_A, P_B}` and at `0`, preferring the larger LoS
/// share on ties.
pub fn solve_single_nlos(
    gamma0: f64,
    gamma1: f64,
    overlap: f64,
    x0: f64,
    x1: f64,
    power_budget: f64,
    gamma_threshold: f64,
) -> Result<PowerAllocation> {
    let gamma_max = max_threshold(gamma0, power_budget);
    if gamma_threshold > gamma_max {
        return Err(Error::InfeasibleThreshold {
            margin: gamma_threshold - gamma_max,
        });
    }
    let coeffs = quad_coeffs(gamma0, gamma1, overlap, power_budget, gamma_threshold);
    let p_a = feasible_upper(&coeffs, power_budget)?;
    let candidate = if x0 * x0 + x1 * x1 > 0.0 {
        p_a.min(cc_extreme(x0, x1, power_budget))
    } else {
        0.0
    };
    let f = |p1: f64| (power_budget - p1).sqrt() * x0 + p1.sqrt() * x1;
    let p1 = if f(candidate) > f(0.0) { candidate } else { 0.0 };
    PowerAllocation::new(vec![power_budget - p1, p1], power_budget)
}

/// Evaluates `g(p_c) = b0ᴴ (Σ_est + I)⁻¹ b0` and its gradient with respect
/// to the NLoS powers; entry k is `-γ_k |b_kᴴ (Σ_est+I)⁻¹ b0|²`.
pub fn g_value_and_gradient(
    p_c: &[f64],
    gamma: &[f64],
    angles: &[f64],
    n_rx: usize,
) -> Result<(f64, Vec<f64>)> {
    let k = angles.len();
    debug_assert_eq!(gamma.len(), k);
    debug_assert_eq!(p_c.len(), k - 1);

    // clutter_covariance consumes a full allocation; splice the LoS slot in.
    let mut full = Vec::with_capacity(k);
    full.push(0.0);
    full.extend_from_slice(p_c);
    let total: f64 = full.iter().sum();
    let p = PowerAllocation::new(full, total)?;
    let sigma = clutter_covariance(&p, gamma, angles, n_rx);
    let inv = regularized_inverse(&sigma)?;

    let b0 = steering_rx(angles[0], n_rx);
    let mb0 = inv.mul_vec(&b0);
    let g = b0.herm_dot(&mb0).re;
    let grad = (1..k)
        .map(|kk| {
            let bk = steering_rx(angles[kk], n_rx);
            -gamma[kk] * bk.herm_dot(&mb0).norm_sqr()
        })
        .collect();
    Ok((g, grad))
}

/// One SCA subproblem: maximize `Σ √p_k x_k` subject to `1ᵀp = P_T`,
/// `p >= 0` and the linearized SCNR constraint
/// `g_lb(p_c) - Γ/(γ0 p0) >= 0`.
pub fn solve_subproblem(
    lin: &Linearization,
    x: &[f64],
    gamma0: f64,
    gamma_threshold: f64,
    power_budget: f64,
) -> Result<PowerAllocation> {
    Ok(solve_subproblem_detailed(lin, x, gamma0, gamma_threshold, power_budget, None)?.allocation)
}

/// [`solve_subproblem`] with diagnostics and an optional warm-start point.
pub fn solve_subproblem_detailed(
    lin: &Linearization,
    x: &[f64],
    gamma0: f64,
    gamma_threshold: f64,
    power_budget: f64,
    warm_start: Option<&PowerAllocation>,
) -> Result<SubproblemSolution> {
    let k = x.len();
    if lin.gradient.len() + 1 != k || lin.ref_point.len() + 1 != k {
        return Err(Error::Invalid(
            "linearization length must match the path count".into(),
        ));
    }
    let inputs_positive = gamma0 > 0.0 && gamma_threshold > 0.0 && power_budget > 0.0;
    if !inputs_positive {
        return Err(Error::Invalid(
            "gamma0, gamma_threshold and power_budget must be positive".into(),
        ));
    }
    if x.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Invalid("gains must be finite and nonnegative".into()));
    }

    // Normalized formulation: u = p / P_T on the unit simplex,
    // objective Σ (x_k √P_T) √u_k, constraint
    // phi(u) = g0 + Σ D_k u_k - R/u0 >= 0.
    let xg: Vec<f64> = x.iter().map(|v| v * power_budget.sqrt()).collect();
    let mut dcoef = vec![0.0; k];
    let mut g0 = lin.g_at_ref;
    for (i, (d, pr)) in lin.gradient.iter().zip(lin.ref_point.iter()).enumerate() {
        dcoef[i + 1] = d * power_budget;
        g0 -= d * pr;
    }
    let ratio = gamma_threshold / (gamma0 * power_budget);

    let problem = Barrier {
        xg,
        dcoef,
        g0,
        ratio,
    };

    // Feasibility of the sensing-centric corner u = e0 decides solvability.
    let phi_corner = g0 - ratio;
    let scale = ratio.max(1.0);
    if phi_corner < -1e-12 * scale {
        return Err(Error::SubproblemInfeasible);
    }
    if k == 1 {
        let allocation = PowerAllocation::new(vec![power_budget], power_budget)?;
        let objective = allocation_objective(&allocation, x);
        return Ok(SubproblemSolution {
            allocation,
            objective,
            kkt_residual: 0.0,
            newton_iterations: 0,
        });
    }
    if phi_corner <= 1e-9 * scale {
        // The feasible set has collapsed onto the sensing-centric corner.
        let allocation = sc_allocation(power_budget, k);
        let objective = allocation_objective(&allocation, x);
        return Ok(SubproblemSolution {
            allocation,
            objective,
            kkt_residual: 0.0,
            newton_iterations: 0,
        });
    }

    let warm_u: Option<Vec<f64>> = warm_start.map(|p| {
        p.as_slice().iter().map(|v| v / power_budget).collect()
    });
    let mut u = problem.starting_point(warm_u.as_deref(), phi_corner)?;

    let m = (k + 1) as f64; // one barrier term per inequality
    let mut t = BARRIER_T0;
    let mut newton_total = 0usize;
    for _ in 0..MAX_OUTER {
        let (_nu, steps) = problem.center(&mut u, t);
        newton_total += steps;
        let obj: f64 = problem.objective(&u);
        if m / t <= GAP_REL * obj.abs().max(1.0) {
            break;
        }
        t *= BARRIER_MU;
    }

    let kkt_residual = problem.kkt_residual(&u, t);

    // Denormalize and snap near-zero entries to exactly zero, moving the
    // residual mass onto the LoS path (which only helps the constraint).
    let mut p: Vec<f64> = u.iter().map(|v| v * power_budget).collect();
    let snap = SNAP_BELOW * power_budget;
    let mut reclaimed = 0.0;
    for entry in p.iter_mut().skip(1) {
        if *entry < snap {
            reclaimed += *entry;
            *entry = 0.0;
        }
    }
    p[0] += reclaimed;
    let allocation = PowerAllocation::new(p, power_budget)?;
    let objective = allocation_objective(&allocation, x);
    Ok(SubproblemSolution {
        allocation,
        objective,
        kkt_residual,
        newton_iterations: newton_total,
    })
}

/// Barrier model for the normalized subproblem.
struct Barrier {
    /// Objective gains in normalized units (`x_k √P_T`).
    xg: Vec<f64>,
    /// Linearized constraint slopes (`d_k P_T`), entry 0 unused.
    dcoef: Vec<f64>,
    /// Constant term of the linearized constraint.
    g0: f64,
    /// `Γ / (γ0 P_T)`.
    ratio: f64,
}

impl Barrier {
    fn dim(&self) -> usize {
        self.xg.len()
    }

    fn objective(&self, u: &[f64]) -> f64 {
        self.xg
            .iter()
            .zip(u.iter())
            .map(|(x, v)| x * v.sqrt())
            .sum()
    }

    fn phi(&self, u: &[f64]) -> f64 {
        let mut acc = self.g0 - self.ratio / u[0];
        for (d, v) in self.dcoef.iter().zip(u.iter()).skip(1) {
            acc += d * v;
        }
        acc
    }

    /// Barrier merit for parameter `t`, scaled by `1/t` so its magnitude
    /// stays at the objective scale for any `t` (keeps the floating-point
    /// noise floor independent of the path parameter). Infinite outside the
    /// strictly feasible region.
    fn merit(&self, u: &[f64], t: f64) -> f64 {
        let phi = self.phi(u);
        if phi <= 0.0 {
            return f64::INFINITY;
        }
        let mut barrier = -phi.ln();
        let mut objective = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            let slack = ui - POWER_FLOOR;
            if slack <= 0.0 {
                return f64::INFINITY;
            }
            barrier -= slack.ln();
            objective += self.xg[i] * ui.sqrt();
        }
        -objective + barrier / t
    }

    /// A strictly feasible start: the warm point if usable, otherwise a blend
    /// toward (and finally exactly) a near-sensing-centric interior point.
    fn starting_point(&self, warm: Option<&[f64]>, phi_corner: f64) -> Result<Vec<f64>> {
        let k = self.dim();
        let d_mass: f64 = self.dcoef.iter().map(|d| d.abs()).sum();
        let eps = (phi_corner / (2.0 * (d_mass + 2.0 * self.ratio * (k - 1) as f64 + 1.0)))
            .clamp(2.0 * POWER_FLOOR, 1e-4);
        let mut near_sc = vec![eps; k];
        near_sc[0] = 1.0 - eps * (k - 1) as f64;

        let usable = |u: &[f64]| -> bool {
            u.iter().all(|v| *v > 1.5 * POWER_FLOOR) && self.phi(u) > 0.0
        };

        if let Some(w) = warm {
            let mut projected: Vec<f64> = w.iter().map(|v| v.max(2.0 * POWER_FLOOR)).collect();
            let total: f64 = projected.iter().sum();
            for v in projected.iter_mut() {
                *v /= total;
            }
            for blend in [0.0, 0.5, 0.9] {
                let cand: Vec<f64> = projected
                    .iter()
                    .zip(near_sc.iter())
                    .map(|(a, b)| (1.0 - blend) * a + blend * b)
                    .collect();
                if usable(&cand) {
                    return Ok(cand);
                }
            }
        }
        if usable(&near_sc) {
            return Ok(near_sc);
        }
        Err(Error::SubproblemInfeasible)
    }

    /// Damped Newton descent on the `1/t`-scaled equality-constrained
    /// barrier problem (the direction is invariant to the scaling). Returns
    /// the equality multiplier and the step count.
    fn center(&self, u: &mut [f64], t: f64) -> (f64, usize) {
        let k = self.dim();
        let mut steps = 0usize;
        let mut best_u = u.to_vec();
        let mut best_nu = 0.0;
        let mut best_res = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let phi = self.phi(u);
            debug_assert!(phi > 0.0);
            let mut grad = vec![0.0; k];
            let mut hdiag = vec![0.0; k];
            let mut q = vec![0.0; k];
            q[0] = self.ratio / (u[0] * u[0]);
            q[1..k].copy_from_slice(&self.dcoef[1..k]);
            for i in 0..k {
                let slack = u[i] - POWER_FLOOR;
                grad[i] = -self.xg[i] / (2.0 * u[i].sqrt()) - (q[i] / phi + 1.0 / slack) / t;
                hdiag[i] =
                    self.xg[i] / (4.0 * u[i] * u[i].sqrt()) + 1.0 / (slack * slack) / t;
            }
            hdiag[0] += 2.0 * self.ratio / (u[0] * u[0] * u[0] * phi) / t;
            let rho = 1.0 / (phi * phi) / t;

            let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
            let ones = vec![1.0; k];
            let a = smw_solve(&hdiag, &q, rho, &neg_grad);
            let b = smw_solve(&hdiag, &q, rho, &ones);
            let sum_b: f64 = b.iter().sum();
            let nu = a.iter().sum::<f64>() / sum_b;
            let delta: Vec<f64> = a.iter().zip(b.iter()).map(|(ai, bi)| ai - nu * bi).collect();

            let lambda2: f64 = -grad.iter().zip(delta.iter()).map(|(g, d)| g * d).sum::<f64>();
            // Stationarity of the original KKT system at the barrier-implied
            // multipliers: grad + nu·1 = -H delta.
            let grad_f_scale = (0..k)
                .map(|i| self.xg[i] / (2.0 * u[i].sqrt()))
                .fold(1e-12, f64::max);
            let res_rel =
                grad.iter().map(|g| (g + nu).abs()).fold(0.0, f64::max) / grad_f_scale;
            if res_rel < best_res {
                best_res = res_rel;
                best_u.copy_from_slice(u);
                best_nu = nu;
            }
            if res_rel <= 5e-11 || !lambda2.is_finite() || res_rel > 100.0 * best_res {
                break;
            }

            // Fraction-to-boundary cap.
            let mut bound = 1.0f64;
            for i in 0..k {
                if delta[i] < 0.0 {
                    bound = bound.min(0.99 * (u[i] - POWER_FLOOR) / -delta[i]);
                }
            }

            let merit0 = self.merit(u, t);
            // Below this, merit decreases drown in floating-point noise and
            // the line search cannot certify progress.
            let merit_noise = 1e-13 * (1.0 + merit0.abs());
            let mut moved = false;
            if lambda2 > merit_noise {
                let slope: f64 = grad.iter().zip(delta.iter()).map(|(g, d)| g * d).sum();
                let mut step = bound;
                for _ in 0..70 {
                    let trial: Vec<f64> = u
                        .iter()
                        .zip(delta.iter())
                        .map(|(ui, di)| ui + step * di)
                        .collect();
                    if self.merit(&trial, t) <= merit0 + 0.25 * step * slope {
                        u.copy_from_slice(&trial);
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
            }
            if !moved {
                // Quadratic basin: take the raw capped Newton step as long
                // as it stays strictly feasible; best_u tracking undoes any
                // overshoot.
                let trial: Vec<f64> = u
                    .iter()
                    .zip(delta.iter())
                    .map(|(ui, di)| ui + bound * di)
                    .collect();
                if self.merit(&trial, t).is_finite() {
                    u.copy_from_slice(&trial);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
            steps += 1;
            // Undo floating-point drift on the equality constraint.
            let drift: f64 = 1.0 - u.iter().sum::<f64>();
            u[0] += drift;
        }
        u.copy_from_slice(&best_u);
        (best_nu, steps)
    }

    /// Stationarity residual of the original KKT system, relative to the
    /// objective-gradient scale. The bound multipliers come from the barrier
    /// (`mu_i = 1/(t·slack_i)`, well conditioned); the constraint and
    /// equality multipliers are fit by least squares with the sign
    /// constraint `lambda >= 0`, since the barrier-implied `1/(t·phi)` loses
    /// precision exactly when the constraint is nearly active.
    fn kkt_residual(&self, u: &[f64], t: f64) -> f64 {
        let k = self.dim();
        let mut r = Vec::with_capacity(k);
        let mut q = Vec::with_capacity(k);
        let mut scale = 1e-12f64;
        for i in 0..k {
            let grad_f = self.xg[i] / (2.0 * u[i].sqrt());
            scale = scale.max(grad_f.abs());
            let mu = 1.0 / (t * (u[i] - POWER_FLOOR));
            r.push(grad_f + mu);
            q.push(if i == 0 {
                self.ratio / (u[0] * u[0])
            } else {
                self.dcoef[i]
            });
        }
        // minimize ||r + lambda q - nu 1||² over (lambda, nu).
        let n = k as f64;
        let qq: f64 = q.iter().map(|v| v * v).sum();
        let qe: f64 = q.iter().sum();
        let qr: f64 = q.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
        let re: f64 = r.iter().sum();
        let det = qq * n - qe * qe;
        let mut lambda = 0.0;
        let mut nu = re / n;
        if det.abs() > 1e-300 {
            let fit = (-qr * n + qe * re) / det;
            if fit >= 0.0 {
                lambda = fit;
                nu = (re * qq - qe * qr) / det;
            }
        }
        r.iter()
            .zip(q.iter())
            .map(|(ri, qi)| (ri + lambda * qi - nu).abs())
            .fold(0.0f64, f64::max)
            / scale
    }
}

/// Solves `(diag(h) + rho q qᵀ) y = v` by Sherman-Morrison.
fn smw_solve(hdiag: &[f64], q: &[f64], rho: f64, v: &[f64]) -> Vec<f64> {
    let inv_v: Vec<f64> = v.iter().zip(hdiag.iter()).map(|(vi, h)| vi / h).collect();
    let inv_q: Vec<f64> = q.iter().zip(hdiag.iter()).map(|(qi, h)| qi / h).collect();
    let qt_inv_v: f64 = q.iter().zip(inv_v.iter()).map(|(a, b)| a * b).sum();
    let qt_inv_q: f64 = q.iter().zip(inv_q.iter()).map(|(a, b)| a * b).sum();
    let factor = rho * qt_inv_v / (1.0 + rho * qt_inv_q);
    inv_v
        .iter()
        .zip(inv_q.iter())
        .map(|(a, b)| a - factor * b)
        .collect()
}

/// SCA driver: linearize the SCNR constraint at the current iterate, solve
/// the convex subproblem, and repeat while the objective keeps increasing by
/// at least `epsilon` (up to `max_iters` subproblem solves).
///
/// Starts from the uniform split; if the first linearization is infeasible it
/// restarts from the sensing-centric point, which is always feasible when the
/// threshold does not exceed `Γ_T`. A nonpositive threshold makes the
/// constraint vacuous and returns the communication-centric optimum directly.
pub fn sca_allocate(
    scenario: &Scenario,
    gamma: &[f64],
    x: &[f64],
    gamma_threshold: f64,
    epsilon: f64,
    max_iters: usize,
) -> Result<ScaState> {
    let k = scenario.k_paths;
    if gamma.len() != k || x.len() != k {
        return Err(Error::Invalid(
            "gamma and x must have one entry per path".into(),
        ));
    }
    let pt = scenario.power_budget;
    let gamma_max = max_threshold(gamma[0], pt);
    if gamma_threshold > gamma_max {
        return Err(Error::InfeasibleThreshold {
            margin: gamma_threshold - gamma_max,
        });
    }

    let finish = |allocation: PowerAllocation, iterations: usize| -> ScaState {
        let objective = allocation_objective(&allocation, x);
        ScaState {
            objective,
            objective_trace: vec![objective],
            allocation,
            iterations,
            converged: true,
        }
    };

    if k == 1 {
        return Ok(finish(sc_allocation(pt, 1), 0));
    }
    if gamma_threshold <= 0.0 {
        return Ok(finish(cc_allocation(x, pt)?, 0));
    }

    let mut reference = PowerAllocation::new(vec![pt / k as f64; k], pt)?;
    let mut incumbent: Option<(PowerAllocation, f64)> = None;
    let mut trace = Vec::new();
    let mut restarted = false;
    let mut converged = false;
    let mut iterations = 0usize;

    for r in 1..=max_iters {
        let (g, grad) =
            g_value_and_gradient(reference.nlos(), gamma, &scenario.angles, scenario.n_rx)?;
        let lin = Linearization {
            g_at_ref: g,
            gradient: grad,
            ref_point: reference.nlos().to_vec(),
        };
        let solved = solve_subproblem_detailed(
            &lin,
            x,
            gamma[0],
            gamma_threshold,
            pt,
            Some(&reference),
        );
        let solution = match solved {
            Ok(s) => s,
            Err(Error::SubproblemInfeasible) if incumbent.is_none() && !restarted => {
                // The uniform start can sit outside the linearized region;
                // the sensing-centric point never does.
                restarted = true;
                reference = sc_allocation(pt, k);
                continue;
            }
            Err(e) => return Err(e),
        };
        iterations = r;

        match &incumbent {
            None => {
                trace.push(solution.objective);
                reference = solution.allocation.clone();
                incumbent = Some((solution.allocation, solution.objective));
            }
            Some((_, best)) => {
                let gain = solution.objective - best;
                if gain > 0.0 {
                    trace.push(solution.objective);
                    reference = solution.allocation.clone();
                    incumbent = Some((solution.allocation, solution.objective));
                    if gain < epsilon {
                        converged = true;
                        break;
                    }
                } else {
                    converged = true;
                    break;
                }
            }
        }
    }

    let (allocation, objective) = incumbent.ok_or(Error::SubproblemInfeasible)?;
    Ok(ScaState {
        allocation,
        objective,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Sensing-centric baseline: the whole budget on the LoS path.
pub fn sc_allocation(power_budget: f64, k_paths: usize) -> PowerAllocation {
    let mut p = vec![0.0; k_paths];
    p[0] = power_budget;
    PowerAllocation::new(p, power_budget).expect("corner allocation is always valid")
}

/// Communication-centric baseline: `p_k = P_T x_k² / Σ x²`, the
/// Cauchy-Schwarz equality point maximizing the rate.
pub fn cc_allocation(x: &[f64], power_budget: f64) -> Result<PowerAllocation> {
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let positive = sum_sq > 0.0;
    if !positive {
        return Err(Error::Invalid(
            "communication-centric split needs a nonzero gain".into(),
        ));
    }
    let p = x
        .iter()
        .map(|v| (v * v / sum_sq) * power_budget)
        .collect::<Vec<_>>();
    PowerAllocation::new(p, power_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::trial_rng;
    use crate::core::steering_overlap;
    use crate::sensing::max_scnr;
    use rand::Rng;

    const PAPER_ANGLES: [f64; 5] = [0.0, -20.0, -10.0, 10.0, 20.0];

    fn scenario(k: usize, angles_deg: &[f64]) -> Scenario {
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

    /// Independent feasibility oracle for the two-path case, algebra only.
    fn scnr_two_path(p1: f64, pt: f64, g0: f64, g1: f64, b: f64) -> f64 {
        (pt - p1) * g0 * (1.0 + p1 * g1 * (1.0 - b)) / (1.0 + p1 * g1)
    }

    struct SingleNlos {
        gamma0: f64,
        gamma1: f64,
        theta1: f64,
        overlap: f64,
        x0: f64,
        x1: f64,
        gamma_threshold: f64,
    }

    fn random_single_nlos(rng: &mut impl Rng) -> SingleNlos {
        let gamma0 = -rng.gen::<f64>().max(1e-12).ln() + 1e-3;
        let gamma1 = -rng.gen::<f64>().max(1e-12).ln() + 1e-3;
        let theta1 = (rng.gen_range(3.0f64..85.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .to_radians();
        let overlap = steering_overlap(0.0, theta1, 16);
        let x0 = 8f64.sqrt();
        let x1 = rng.gen_range(0.0..3.0);
        let gamma_threshold = rng.gen_range(0.001..0.999) * gamma0 * 100.0;
        SingleNlos {
            gamma0,
            gamma1,
            theta1,
            overlap,
            x0,
            x1,
            gamma_threshold,
        }
    }

    #[test]
    fn quad_coeffs_degenerate_and_boundary() {
        let c = quad_coeffs(2.0, 0.5, 1.0, 100.0, 10.0);
        assert_eq!(c.a, 0.0);
        let c2 = quad_coeffs(2.0, 0.5, 0.3, 100.0, 200.0);
        assert!(c2.c.abs() < 1e-12, "c must vanish at the max threshold");
    }

    #[test]
    fn quad_sign_agrees_with_scnr_constraint() {
        // Oracle route: the matrix-based max_scnr from the sensing module.
        let mut rng = trial_rng(300, 0);
        let pt = 100.0;
        for _ in 0..20 {
            let inst = random_single_nlos(&mut rng);
            let angles = [0.0, inst.theta1];
            let coeffs = quad_coeffs(
                inst.gamma0,
                inst.gamma1,
                inst.overlap,
                pt,
                inst.gamma_threshold,
            );
            let h_scale =
                coeffs.a * pt * pt + coeffs.b_lin.abs() * pt + coeffs.c.abs() + 1e-12;
            for i in 0..1000 {
                let p1 = pt * i as f64 / 999.0;
                let h = coeffs.a * p1 * p1 + coeffs.b_lin * p1 + coeffs.c;
                let p = PowerAllocation::new(vec![pt - p1, p1], pt).unwrap();
                let scnr = max_scnr(&p, &[inst.gamma0, inst.gamma1], &angles, 16).unwrap();
                if h.abs() < 1e-9 * h_scale
                    || (scnr - inst.gamma_threshold).abs() < 1e-9 * inst.gamma_threshold
                {
                    continue; // tie region
                }
                assert_eq!(
                    h <= 0.0,
                    scnr >= inst.gamma_threshold,
                    "sign mismatch at p1={p1}"
                );
            }
        }
    }

    #[test]
    fn feasible_upper_boundary_cases() {
        let pt = 100.0;
        // Threshold at the max: only p1 = 0 feasible.
        let c = quad_coeffs(2.0, 0.5, 0.3, pt, 2.0 * pt);
        assert!(feasible_upper(&c, pt).unwrap().abs() < 1e-12);
        // No threshold: the constraint never binds.
        let c0 = quad_coeffs(2.0, 0.5, 0.3, pt, 0.0);
        assert_eq!(feasible_upper(&c0, pt).unwrap(), pt);
        // Above the max: infeasible.
        let cbad = quad_coeffs(2.0, 0.5, 0.3, pt, 2.5 * pt);
        assert!(matches!(
            feasible_upper(&cbad, pt),
            Err(Error::InfeasibleThreshold { .. })
        ));
    }

    #[test]
    fn feasible_upper_root_residual() {
        let mut rng = trial_rng(301, 0);
        let pt = 100.0;
        for _ in 0..500 {
            let inst = random_single_nlos(&mut rng);
            let coeffs = quad_coeffs(
                inst.gamma0,
                inst.gamma1,
                inst.overlap,
                pt,
                inst.gamma_threshold,
            );
            let p_a = feasible_upper(&coeffs, pt).unwrap();
            if p_a < pt {
                let h = coeffs.a * p_a * p_a + coeffs.b_lin * p_a + coeffs.c;
                let scale =
                    coeffs.a * p_a * p_a + coeffs.b_lin.abs() * p_a + coeffs.c.abs() + 1e-12;
                assert!(h.abs() <= 1e-9 * scale, "root residual {h} vs scale {scale}");
            }
        }
    }

    #[test]
    fn cc_extreme_reference_points() {
        assert!((cc_extreme(1.0, 1.0, 100.0) - 50.0).abs() < 1e-12);
        assert_eq!(cc_extreme(1.0, 0.0, 100.0), 0.0);
        assert!((cc_extreme(1.0, 2.0, 100.0) - 80.0).abs() < 1e-12);
    }

    #[test]
    fn single_nlos_boundary_solutions() {
        let pt = 100.0;
        let overlap = steering_overlap(0.0, (-20.0f64).to_radians(), 16);
        // Threshold at the max forces the sensing-centric corner.
        let p = solve_single_nlos(2.0, 0.5, overlap, 2.0, 1.0, pt, 2.0 * pt).unwrap();
        assert_eq!(p.as_slice(), &[pt, 0.0]);
        // No threshold recovers the unconstrained extreme point.
        let p0 = solve_single_nlos(2.0, 0.5, overlap, 1.0, 2.0, pt, 0.0).unwrap();
        assert!((p0.get(1) - 80.0).abs() < 1e-9);
        // Infeasible threshold is a typed error.
        assert!(matches!(
            solve_single_nlos(2.0, 0.5, overlap, 1.0, 2.0, pt, 300.0),
            Err(Error::InfeasibleThreshold { .. })
        ));
    }

    /// Largest feasible NLoS power by bisection on the scalar SCNR formula
    /// (independent of `feasible_upper`).
    fn feasible_interval_end(pt: f64, g0: f64, g1: f64, b: f64, threshold: f64) -> f64 {
        if scnr_two_path(pt, pt, g0, g1, b) >= threshold {
            return pt;
        }
        let (mut lo, mut hi) = (0.0f64, pt);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if scnr_two_path(mid, pt, g0, g1, b) >= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn single_nlos_matches_grid_oracle() {
        let mut rng = trial_rng(302, 0);
        let pt = 100.0;
        for _ in 0..100 {
            let inst = random_single_nlos(&mut rng);
            let p = solve_single_nlos(
                inst.gamma0,
                inst.gamma1,
                inst.overlap,
                inst.x0,
                inst.x1,
                pt,
                inst.gamma_threshold,
            )
            .unwrap();
            let f_star = allocation_objective(&p, &[inst.x0, inst.x1]);

            // Grid over the feasible interval [0, min(P_A, P_T)], endpoint
            // included so the boundary optimum lands on a grid point.
            let upper = feasible_interval_end(
                pt,
                inst.gamma0,
                inst.gamma1,
                inst.overlap,
                inst.gamma_threshold,
            );
            let mut best = f64::NEG_INFINITY;
            let n = 100_000;
            for i in 0..=n {
                let p1 = upper * i as f64 / n as f64;
                let f = (pt - p1).sqrt() * inst.x0 + p1.sqrt() * inst.x1;
                best = best.max(f);
            }
            assert!(
                (f_star - best).abs() <= 1e-6 * best.abs().max(1e-12),
                "closed form {f_star} vs grid {best}"
            );
        }
    }

    #[test]
    fn gradient_at_origin_and_orthogonal_clutter() {
        let s = scenario(5, &PAPER_ANGLES);
        let gamma = [1.0, 0.8, 1.2, 0.5, 0.9];
        let (g, grad) = g_value_and_gradient(&[0.0; 4], &gamma, &s.angles, s.n_rx).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        for (k, d) in grad.iter().enumerate() {
            let expected = -gamma[k + 1] * steering_overlap(s.angles[0], s.angles[k + 1], s.n_rx);
            assert!((d - expected).abs() < 1e-10);
            assert!(*d <= 0.0);
        }

        // Orthogonal clutter: sin spacing multiples of 2/N.
        let n = 16usize;
        let ortho: Vec<f64> = [0.0, 2.0, 4.0, 6.0]
            .iter()
            .map(|m| (m / n as f64).asin())
            .collect();
        let gamma4 = [1.0, 0.5, 0.7, 0.9];
        let (g_o, grad_o) =
            g_value_and_gradient(&[10.0, 20.0, 5.0], &gamma4, &ortho, n).unwrap();
        assert!((g_o - 1.0).abs() < 1e-10);
        for d in grad_o {
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = scenario(5, &PAPER_ANGLES);
        let mut rng = trial_rng(303, 0);
        let pt = s.power_budget;
        for _ in 0..20 {
            let gamma: Vec<f64> = (0..5).map(|_| rng.gen_range(0.05..2.0)).collect();
            let p_c: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..pt / 4.0)).collect();
            let (_, grad) = g_value_and_gradient(&p_c, &gamma, &s.angles, s.n_rx).unwrap();
            let h = 1e-6 * pt;
            for k in 0..4 {
                let mut plus = p_c.clone();
                plus[k] += h;
                let mut minus = p_c.clone();
                minus[k] = (minus[k] - h).max(0.0);
                let (gp, _) = g_value_and_gradient(&plus, &gamma, &s.angles, s.n_rx).unwrap();
                let (gm, _) = g_value_and_gradient(&minus, &gamma, &s.angles, s.n_rx).unwrap();
                let fd = (gp - gm) / (plus[k] - minus[k]);
                let scale = grad.iter().map(|g| g.abs()).fold(1e-12, f64::max);
                assert!(
                    (fd - grad[k]).abs() <= 1e-5 * scale,
                    "fd {fd} vs analytic {} (k={k})",
                    grad[k]
                );
            }
        }
    }

    fn subproblem_instance(
        s: &Scenario,
        gamma: &[f64],
        reference: &PowerAllocation,
    ) -> Linearization {
        let (g, grad) =
            g_value_and_gradient(reference.nlos(), gamma, &s.angles, s.n_rx).unwrap();
        Linearization {
            g_at_ref: g,
            gradient: grad,
            ref_point: reference.nlos().to_vec(),
        }
    }

    #[test]
    fn subproblem_vanishing_threshold_recovers_cc() {
        let s = scenario(3, &[0.0, -20.0, 20.0]);
        let gamma = [1.0, 0.5, 0.8];
        let x = [8f64.sqrt(), 1.2, 2.1];
        let reference = PowerAllocation::new(vec![100.0 / 3.0; 3], 100.0).unwrap();
        let lin = subproblem_instance(&s, &gamma, &reference);
        let sol =
            solve_subproblem_detailed(&lin, &x, gamma[0], 1e-9, s.power_budget, None).unwrap();
        let cc = cc_allocation(&x, s.power_budget).unwrap();
        let cc_obj = allocation_objective(&cc, &x);
        assert!(
            (sol.objective - cc_obj).abs() < 1e-6 * cc_obj,
            "{} vs {}",
            sol.objective,
            cc_obj
        );
    }

    #[test]
    fn subproblem_matches_one_dimensional_grid_at_k2() {
        let s = scenario(2, &[0.0, -20.0]);
        let mut rng = trial_rng(304, 0);
        let pt = s.power_budget;
        for _ in 0..25 {
            let gamma = [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)];
            let x = [8f64.sqrt(), rng.gen_range(0.1..3.0)];
            let gamma_threshold = rng.gen_range(0.05..0.9) * gamma[0] * pt;
            let reference = PowerAllocation::new(vec![pt / 2.0; 2], pt).unwrap();
            let lin = subproblem_instance(&s, &gamma, &reference);
            let solved = solve_subproblem_detailed(&lin, &x, gamma[0], gamma_threshold, pt, None);
            let sol = match solved {
                Ok(sol) => sol,
                Err(Error::SubproblemInfeasible) => continue,
                Err(e) => panic!("unexpected error {e}"),
            };

            // Oracle: dense grid on the linearized feasible set.
            let g_lb = |p1: f64| lin.g_at_ref + lin.gradient[0] * (p1 - lin.ref_point[0]);
            let mut best = f64::NEG_INFINITY;
            let n = 200_000;
            for i in 0..=n {
                let p1 = pt * i as f64 / n as f64;
                let p0 = pt - p1;
                if p0 <= 0.0 {
                    continue;
                }
                if g_lb(p1) - gamma_threshold / (gamma[0] * p0) >= 0.0 {
                    best = best.max(p0.sqrt() * x[0] + p1.sqrt() * x[1]);
                }
            }
            assert!(
                sol.objective >= best - 1e-6 * best.abs().max(1.0),
                "barrier {} vs grid {best}",
                sol.objective
            );
            assert!(sol.kkt_residual <= 1e-8, "kkt residual {}", sol.kkt_residual);
        }
    }

    #[test]
    fn subproblem_beats_simplex_grid_at_k3() {
        let s = scenario(3, &[0.0, -20.0, 20.0]);
        let mut rng = trial_rng(305, 0);
        let pt = s.power_budget;
        let gamma = [0.9, 0.6, 1.4];
        let x = [8f64.sqrt(), 1.7, 0.9];
        let gamma_threshold = 0.4 * gamma[0] * pt;
        let reference = PowerAllocation::new(vec![pt / 3.0; 3], pt).unwrap();
        let lin = subproblem_instance(&s, &gamma, &reference);
        let sol =
            solve_subproblem_detailed(&lin, &x, gamma[0], gamma_threshold, pt, None).unwrap();

        let g_lb = |pc: [f64; 2]| {
            lin.g_at_ref
                + lin.gradient[0] * (pc[0] - lin.ref_point[0])
                + lin.gradient[1] * (pc[1] - lin.ref_point[1])
        };
        let mut best = f64::NEG_INFINITY;
        for _ in 0..1_000_000 {
            let draws = [
                -rng.gen::<f64>().max(1e-12).ln(),
                -rng.gen::<f64>().max(1e-12).ln(),
                -rng.gen::<f64>().max(1e-12).ln(),
            ];
            let total: f64 = draws.iter().sum();
            let p = [
                pt * draws[0] / total,
                pt * draws[1] / total,
                pt * draws[2] / total,
            ];
            if p[0] > 0.0 && g_lb([p[1], p[2]]) - gamma_threshold / (gamma[0] * p[0]) >= 0.0 {
                let f = p[0].sqrt() * x[0] + p[1].sqrt() * x[1] + p[2].sqrt() * x[2];
                best = best.max(f);
            }
        }
        assert!(
            sol.objective >= best - 1e-5,
            "barrier {} vs simplex grid {best}",
            sol.objective
        );

        // Primal feasibility at the output.
        let p = sol.allocation.as_slice();
        assert!((p.iter().sum::<f64>() - pt).abs() <= 1e-10 * pt);
        assert!(p.iter().all(|v| *v >= 0.0));
        let phi = g_lb([p[1], p[2]]) - gamma_threshold / (gamma[0] * p[0]);
        assert!(phi >= -1e-10);
    }

    #[test]
    fn sca_matches_closed_form_for_single_nlos() {
        let s = scenario(2, &[0.0, -20.0]);
        let overlap = steering_overlap(s.angles[0], s.angles[1], s.n_rx);
        let mut rng = trial_rng(306, 0);
        for _ in 0..100 {
            let gamma = [rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0)];
            let x = [8f64.sqrt(), rng.gen_range(0.0..3.0)];
            let gamma_threshold = rng.gen_range(0.01..0.999) * gamma[0] * s.power_budget;

            let closed = solve_single_nlos(
                gamma[0],
                gamma[1],
                overlap,
                x[0],
                x[1],
                s.power_budget,
                gamma_threshold,
            )
            .unwrap();
            let sca = sca_allocate(&s, &gamma, &x, gamma_threshold, DEFAULT_EPSILON, 100).unwrap();

            let rate_closed =
                crate::channel::rate(allocation_objective(&closed, &x).powi(2) / s.noise_comm);
            let rate_sca = crate::channel::rate(sca.objective.powi(2) / s.noise_comm);
            assert!(
                (rate_sca - rate_closed).abs() <= 1e-4 * rate_closed.abs().max(1e-12),
                "sca rate {rate_sca} vs closed {rate_closed}"
            );
        }
    }

    #[test]
    fn sca_collapses_to_sensing_centric_at_max_threshold() {
        let s = scenario(5, &PAPER_ANGLES);
        let mut rng = trial_rng(307, 0);
        let gamma: Vec<f64> = (0..5).map(|_| rng.gen_range(0.2..2.0)).collect();
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(0.3..3.0)).collect();
        let gamma_threshold = gamma[0] * s.power_budget * (1.0 - 1e-9);
        let state = sca_allocate(&s, &gamma, &x, gamma_threshold, DEFAULT_EPSILON, 100).unwrap();
        assert!(
            state.allocation.los() >= s.power_budget * (1.0 - 1e-3),
            "LoS power {} of {}",
            state.allocation.los(),
            s.power_budget
        );
    }

    #[test]
    fn sca_recovers_cc_when_constraint_is_loose() {
        let s = scenario(5, &PAPER_ANGLES);
        let mut rng = trial_rng(308, 0);
        let gamma: Vec<f64> = (0..5).map(|_| rng.gen_range(0.2..2.0)).collect();
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(0.3..3.0)).collect();
        let cc = cc_allocation(&x, s.power_budget).unwrap();
        let scnr_cc = max_scnr(&cc, &gamma, &s.angles, s.n_rx).unwrap();
        let gamma_threshold = 0.5 * scnr_cc;
        let state = sca_allocate(&s, &gamma, &x, gamma_threshold, DEFAULT_EPSILON, 100).unwrap();
        let cc_obj = allocation_objective(&cc, &x);
        let rate_cc = crate::channel::rate(cc_obj.powi(2) / s.noise_comm);
        let rate_sca = crate::channel::rate(state.objective.powi(2) / s.noise_comm);
        assert!(
            (rate_sca - rate_cc).abs() <= 1e-6 * rate_cc,
            "sca {rate_sca} vs cc {rate_cc}"
        );
    }

    #[test]
    fn sca_trace_monotone_and_feasible() {
        let s = scenario(5, &PAPER_ANGLES);
        let mut rng = trial_rng(309, 0);
        for _ in 0..40 {
            let gamma: Vec<f64> = (0..5)
                .map(|_| -rng.gen::<f64>().max(1e-12).ln() + 0.01)
                .collect();
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..3.0)).collect();
            let gamma_threshold = rng.gen_range(0.05..0.98) * gamma[0] * s.power_budget;
            let state =
                sca_allocate(&s, &gamma, &x, gamma_threshold, DEFAULT_EPSILON, 100).unwrap();
            for w in state.objective_trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-10, "objective decreased: {w:?}");
            }
            let scnr = max_scnr(&state.allocation, &gamma, &s.angles, s.n_rx).unwrap();
            assert!(
                scnr >= gamma_threshold * (1.0 - 1e-8),
                "final iterate violates the SCNR constraint: {scnr} < {gamma_threshold}"
            );
        }
    }

    #[test]
    fn sca_rejects_excessive_threshold() {
        let s = scenario(5, &PAPER_ANGLES);
        let gamma = [1.0; 5];
        let x = [1.0; 5];
        assert!(matches!(
            sca_allocate(&s, &gamma, &x, 101.0, DEFAULT_EPSILON, 100),
            Err(Error::InfeasibleThreshold { .. })
        ));
    }

    #[test]
    fn corner_allocations() {
        let sc = sc_allocation(100.0, 5);
        assert_eq!(sc.as_slice(), &[100.0, 0.0, 0.0, 0.0, 0.0]);
        // SC reaches exactly the max threshold.
        let s = scenario(5, &PAPER_ANGLES);
        let gamma = [1.7, 0.5, 0.5, 0.5, 0.5];
        let scnr = max_scnr(&sc, &gamma, &s.angles, s.n_rx).unwrap();
        assert!((scnr - max_threshold(gamma[0], 100.0)).abs() < 1e-9 * scnr);

        let cc = cc_allocation(&[1.0, 1.0, 1.0, 1.0], 100.0).unwrap();
        for v in cc.as_slice() {
            assert!((v - 25.0).abs() < 1e-9);
        }
        let x = [2.0, 0.5, 1.0];
        let cc2 = cc_allocation(&x, 100.0).unwrap();
        let obj = allocation_objective(&cc2, &x);
        let expect = (100.0 * x.iter().map(|v| v * v).sum::<f64>()).sqrt();
        assert!((obj - expect).abs() < 1e-9 * expect);

        assert!(cc_allocation(&[0.0, 0.0], 100.0).is_err());
        assert_eq!(max_threshold(2.0, 100.0), 200.0);
        assert_eq!(max_threshold(0.0, 100.0), 0.0);
    }

    #[test]
    fn cc_allocation_is_simplex_optimal() {
        let mut rng = trial_rng(310, 0);
        let x = [1.3, 0.4, 2.2];
        let pt = 100.0;
        let cc = cc_allocation(&x, pt).unwrap();
        let best = allocation_objective(&cc, &x);
        for _ in 0..100_000 {
            let draws = [
                -rng.gen::<f64>().max(1e-12).ln(),
                -rng.gen::<f64>().max(1e-12).ln(),
                -rng.gen::<f64>().max(1e-12).ln(),
            ];
            let total: f64 = draws.iter().sum();
            let obj: f64 = draws
                .iter()
                .zip(x.iter())
                .map(|(d, xy)| (pt * d / total).sqrt() * xy)
                .sum();
            assert!(obj <= best + 1e-9, "simplex point beat the CC split");
        }
    }
}

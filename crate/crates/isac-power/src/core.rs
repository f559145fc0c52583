//! Complex vectors, Hermitian matrices, and uniform-linear-array steering.
//!
//! Everything here is desk scale (matrices no larger than the receive array),
//! so storage is dense and Hermitian solves go through a plain Cholesky
//! factorization. Half-wavelength element spacing is baked into the steering
//! phase and is not configurable.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for the Hermitian-symmetry check on construction.
const HERMITIAN_TOL: f64 = 1e-12;

/// A nonempty vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    entries: Vec<Complex64>,
}

impl ComplexVec {
    /// Wraps raw entries. Fails on empty or non-finite input.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("complex vector must be nonempty".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("complex vector has non-finite entries".into()));
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.entries.iter()
    }

    /// Hermitian inner product `selfᴴ · other`.
    pub fn herm_dot(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Entrywise scaling by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }
}

impl std::ops::Index<usize> for ComplexVec {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

/// A dense Hermitian matrix (equal to its own conjugate transpose to 1e-12).
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    n: usize,
    // Row-major full storage.
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix size must be positive");
        Self {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::ONE;
        }
        m
    }

    /// Builds from row-major entries, checking the Hermitian invariant.
    pub fn from_entries(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Invalid(format!(
                "expected {n}x{n} = {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix has non-finite entries".into()));
        }
        for i in 0..n {
            for j in i..n {
                let d = data[i * n + j] - data[j * n + i].conj();
                if d.norm() > HERMITIAN_TOL {
                    return Err(Error::Invalid(format!(
                        "matrix is not Hermitian at ({i},{j}): asymmetry {:.3e}",
                        d.norm()
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// In-place rank-1 update `self += weight · v vᴴ` (real weight keeps the
    /// matrix Hermitian).
    pub fn add_scaled_outer(&mut self, weight: f64, v: &ComplexVec) {
        debug_assert_eq!(self.n, v.len());
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] += weight * v[i] * v[j].conj();
            }
        }
    }

    pub fn mul_vec(&self, v: &ComplexVec) -> ComplexVec {
        debug_assert_eq!(self.n, v.len());
        let n = self.n;
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect();
        ComplexVec { entries }
    }

    /// Real quadratic form `vᴴ M v` (real by Hermitian symmetry).
    pub fn quad_form(&self, v: &ComplexVec) -> f64 {
        v.herm_dot(&self.mul_vec(v)).re
    }

    /// Sum of diagonal entries (real for a Hermitian matrix).
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Largest entrywise deviation from exact Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    /// Forces exact Hermitian symmetry by averaging mirrored entries.
    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            self.data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }
}

/// Cholesky factor `L` of a Hermitian positive definite matrix, `M = L Lᴴ`.
pub(crate) struct Cholesky {
    n: usize,
    l: Vec<Complex64>,
}

impl Cholesky {
    /// Factorizes `m`; fails when a pivot is not strictly positive, i.e. the
    /// matrix is not positive definite.
    pub(crate) fn factor(m: &HermitianMatrix) -> Result<Self> {
        let n = m.n;
        let mut l = vec![Complex64::ZERO; n * n];
        for j in 0..n {
            let mut d = m.data[j * n + j].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveSemidefinite);
            }
            let ljj = d.sqrt();
            l[j * n + j] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..n {
                let mut s = m.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    /// Solves `L Lᴴ x = rhs`.
    pub(crate) fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(rhs.len(), self.n);
        let n = self.n;
        let mut y = rhs.to_vec();
        // Forward substitution: L y = rhs.
        for i in 0..n {
            for k in 0..i {
                let lk = self.l[i * n + k];
                y[i] = y[i] - lk * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        // Back substitution: Lᴴ x = y.
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lk = self.l[k * n + i].conj();
                y[i] = y[i] - lk * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }

    /// Dense inverse, symmetrized to machine precision.
    pub(crate) fn inverse(&self) -> HermitianMatrix {
        let n = self.n;
        let mut inv = HermitianMatrix::zeros(n);
        let mut e = vec![Complex64::ZERO; n];
        for j in 0..n {
            e[j] = Complex64::ONE;
            let col = self.solve(&e);
            e[j] = Complex64::ZERO;
            for (i, v) in col.iter().enumerate() {
                inv.data[i * n + j] = *v;
            }
        }
        inv.symmetrize();
        inv
    }
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
pub(crate) fn hpd_inverse(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(Cholesky::factor(m)?.inverse())
}

fn steering(theta: f64, n: usize) -> ComplexVec {
    debug_assert!(n >= 1, "steering vector needs at least one element");
    debug_assert!(
        (-FRAC_PI_2..=FRAC_PI_2).contains(&theta),
        "angle {theta} outside [-pi/2, pi/2]"
    );
    let scale = 1.0 / (n as f64).sqrt();
    let step = -PI * theta.sin();
    let entries = (0..n)
        .map(|m| Complex64::from_polar(scale, step * m as f64))
        .collect();
    ComplexVec { entries }
}

/// Unit-norm transmit steering vector of an `n_tx`-element half-wavelength
/// ULA toward angle `theta` (radians): entry m is `e^{-jπ m sinθ} / √n_tx`.
pub fn steering_tx(theta: f64, n_tx: usize) -> ComplexVec {
    steering(theta, n_tx)
}

/// Unit-norm receive steering vector, same phase law with `n_rx` elements.
pub fn steering_rx(theta: f64, n_rx: usize) -> ComplexVec {
    steering(theta, n_rx)
}

/// Squared magnitude of the receive-steering inner product,
/// `|b(θ0)ᴴ b(θ1)|²` — the beam overlap between two directions.
pub fn steering_overlap(theta0: f64, theta1: f64, n_rx: usize) -> f64 {
    let b0 = steering_rx(theta0, n_rx);
    let b1 = steering_rx(theta1, n_rx);
    b0.herm_dot(&b1).norm_sqr()
}

/// Computes `(Σ + I)⁻¹` for positive semidefinite `Σ`.
///
/// Non-PSD input is rejected when the Cholesky factorization of `Σ + I`
/// fails. The result is Hermitian to machine precision.
pub fn regularized_inverse(sigma: &HermitianMatrix) -> Result<HermitianMatrix> {
    let shifted = sigma.add(&HermitianMatrix::identity(sigma.n));
    hpd_inverse(&shifted)
}

/// Closed-form `[load · b bᴴ + I]⁻¹ = I − load/(load+1) · b bᴴ` for a unit
/// vector `b` (rank-1 Woodbury identity).
pub fn woodbury_rank1_inverse(load: f64, b: &ComplexVec) -> HermitianMatrix {
    debug_assert!(load >= 0.0, "load must be nonnegative");
    debug_assert!((b.norm() - 1.0).abs() < 1e-9, "b must have unit norm");
    let mut m = HermitianMatrix::identity(b.len());
    if load > 0.0 {
        m.add_scaled_outer(-load / (load + 1.0), b);
    }
    m
}

//! Discrete Bessel (order-zero Hankel) basis on `[0, ρ₀]` with a hard wall at ρ₀.
//!
//! Modes are `φ_n(ρ) = √2 / (ρ₀ |J₁(j_n)|) · J₀(j_n ρ / ρ₀)`, orthonormal under
//! `ρ dρ`. The grid side lives on the collocation points
//! `ρ_m = j_m ρ₀ / j_{N+1}` and stores quadrature-weighted values
//! `g_m = √w_m f(ρ_m)`, `w_m = 2ρ₀² / (j_{N+1}² J₁(j_m)²)`, so that
//! `Σ|g_m|² ≈ ∫|f|² ρ dρ`.
//!
//! The weighted sampling matrix `B_mn = √w_m φ_n(ρ_m)` is the usual
//! discrete-Hankel matrix; it is orthogonal only up to a quadrature defect
//! (about 1e-7 for 16 modes). The transform pair used for propagation is its
//! polar factor `Q = B (BᵀB)^{-1/2}`, which is exactly orthogonal, so norms and
//! unitarity are preserved to rounding. [`BesselBasis::project`] is the exact
//! collocation inverse `B⁻¹` for expanding sampled functions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bessel::{bessel_j0_zeros, j0, j1};
use crate::error::{domain, Result};

#[derive(Debug, Clone)]
pub struct BesselBasis {
    n_modes: usize,
    rho_max: f64,
    zeros: Vec<f64>,
    points: Vec<f64>,
    weights: Vec<f64>,
    eigenvalues: Vec<f64>,
    /// `Q[m][n]`, row-major, grid index first.
    backward: Vec<f64>,
    /// `Qᵀ`, row-major, mode index first.
    forward: Vec<f64>,
    /// `B⁻¹`, row-major, mode index first.
    projector: Vec<f64>,
}

impl BesselBasis {
    pub fn new(n_modes: usize, rho_max: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(domain("n_modes", "need at least one mode"));
        }
        if !(rho_max > 0.0 && rho_max.is_finite()) {
            return Err(domain("rho_max", format!("must be > 0, got {rho_max}")));
        }
        let n = n_modes;
        let zeros = bessel_j0_zeros(n + 1);
        let s = zeros[n];
        let points: Vec<f64> = zeros[..n].iter().map(|j| j * rho_max / s).collect();
        let weights: Vec<f64> = zeros[..n]
            .iter()
            .map(|&j| 2.0 * rho_max * rho_max / (s * s * j1(j).powi(2)))
            .collect();
        let eigenvalues = zeros[..n].iter().map(|j| (j / rho_max).powi(2)).collect();

        let sampling = DMatrix::from_fn(n, n, |m, k| {
            2.0 * j0(zeros[m] * zeros[k] / s) / (s * j1(zeros[m]).abs() * j1(zeros[k]).abs())
        });
        let svd = sampling.clone().svd(true, true);
        let q = svd.u.expect("u requested") * svd.v_t.expect("v_t requested");
        let projector = sampling
            .try_inverse()
            .ok_or_else(|| domain("n_modes", "collocation matrix is singular"))?;

        let row_major = |m: &DMatrix<f64>| -> Vec<f64> {
            (0..n)
                .flat_map(|i| (0..n).map(move |k| (i, k)))
                .map(|(i, k)| m[(i, k)])
                .collect()
        };
        Ok(Self {
            n_modes,
            rho_max,
            zeros,
            points,
            weights,
            eigenvalues,
            backward: row_major(&q),
            forward: row_major(&q.transpose()),
            projector: row_major(&projector),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    /// The first `n_modes + 1` zeros of J₀.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(j_n/ρ₀)²`: eigenvalues of `−(∂²_ρ + ρ⁻¹∂_ρ)` per mode.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-major `Q`, mapping mode coefficients to weighted grid values.
    pub fn backward_matrix(&self) -> &[f64] {
        &self.backward
    }

    /// Row-major `Qᵀ`, mapping weighted grid values to mode coefficients.
    pub fn forward_matrix(&self) -> &[f64] {
        &self.forward
    }

    /// Orthonormal mode `n` (zero-based) evaluated at `rho`.
    pub fn basis_function(&self, n: usize, rho: f64) -> f64 {
        let j = self.zeros[n];
        2f64.sqrt() / (self.rho_max * j1(j).abs()) * j0(j * rho / self.rho_max)
    }

    /// Weighted grid values `√w_m f(ρ_m)`.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w.sqrt() * f(r))
            .collect()
    }

    fn apply<T>(matrix: &[f64], n: usize, input: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
    {
        assert_eq!(input.len(), n, "expected {n} values");
        (0..n)
            .map(|i| {
                let mut acc = T::default();
                for (k, &x) in input.iter().enumerate() {
                    acc += x * matrix[i * n + k];
                }
                acc
            })
            .collect()
    }

    pub fn forward(&self, grid: &[f64]) -> Vec<f64> {
        Self::apply(&self.forward, self.n_modes, grid)
    }

    pub fn backward(&self, modes: &[f64]) -> Vec<f64> {
        Self::apply(&self.backward, self.n_modes, modes)
    }

    pub fn forward_complex(&self, grid: &[Complex64]) -> Vec<Complex64> {
        Self::apply(&self.forward, self.n_modes, grid)
    }

    pub fn backward_complex(&self, modes: &[Complex64]) -> Vec<Complex64> {
        Self::apply(&self.backward, self.n_modes, modes)
    }

    /// Exact collocation expansion: the coefficients whose mode sum reproduces
    /// the sampled values at every collocation point.
    pub fn project(&self, grid: &[f64]) -> Vec<f64> {
        Self::apply(&self.projector, self.n_modes, grid)
    }

    /// Radial Laplacian `∂²_ρ + ρ⁻¹∂_ρ` applied in the weighted grid representation.
    pub fn laplacian(&self, grid: &[f64]) -> Vec<f64> {
        let modes: Vec<f64> = self
            .forward(grid)
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, l)| -c * l)
            .collect();
        self.backward(&modes)
    }

    /// Dense `Q · diag(factors) · Qᵀ`, row-major: a mode-diagonal operator in grid space.
    pub fn grid_operator(&self, factors: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_modes;
        let mut out = vec![Complex64::default(); n * n];
        for i in 0..n {
            for k in 0..n {
                out[i * n + k] = (0..n)
                    .map(|l| factors[l] * (self.backward[i * n + l] * self.backward[k * n + l]))
                    .sum();
            }
        }
        out
    }
}

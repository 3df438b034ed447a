//! Spectral building blocks: periodic Fourier grids, kinetic propagators and
//! the discrete Bessel basis for the cylindrical radius.

mod bessel;
mod hankel;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Result};

pub use bessel::{bessel_j0_zeros, j0, j1};
pub use hankel::BesselBasis;

/// Uniform periodic grid `x_j = min + j·spacing`, `spacing = (max − min)/n`.
///
/// `max` itself is not a grid point; it is identified with `min`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    n_points: usize,
    min: f64,
    max: f64,
}

impl UniformGrid {
    pub fn new(n_points: usize, min: f64, max: f64) -> Result<Self> {
        if n_points < 2 {
            return Err(domain(
                "n_points",
                format!("need at least 2 points, got {n_points}"),
            ));
        }
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(domain("max", format!("need max > min, got [{min}, {max}]")));
        }
        Ok(Self { n_points, min, max })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n_points as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }

    /// Angular wavenumbers in standard DFT order: `0, 1, …, n/2−1, −n/2, …, −1` times `2π/L`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dk = 2.0 * PI / (self.max - self.min);
        (0..n)
            .map(|j| if j < (n + 1) / 2 { j } else { j - n })
            .map(|j| j as f64 * dk)
            .collect()
    }

    /// Index of the first grid point at or above `x`.
    pub fn index_at_or_above(&self, x: f64) -> usize {
        let j = ((x - self.min) / self.spacing()).ceil();
        (j.max(0.0) as usize).min(self.n_points)
    }
}

/// A real- or imaginary-time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Unitary evolution `exp(−iHt)`.
    Real(f64),
    /// Diffusive relaxation `exp(−Hτ)`.
    Imaginary(f64),
}

impl TimeStep {
    pub fn duration(&self) -> f64 {
        match *self {
            TimeStep::Real(t) | TimeStep::Imaginary(t) => t,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            TimeStep::Real(t) => TimeStep::Real(t * factor),
            TimeStep::Imaginary(t) => TimeStep::Imaginary(t * factor),
        }
    }

    /// Propagator of a (possibly absorbing) energy `re − i·absorb` over this step.
    ///
    /// Absorption only acts in real time.
    pub fn factor(&self, energy: f64, absorb: f64) -> Complex64 {
        match *self {
            TimeStep::Real(t) => Complex64::from_polar((-absorb * t).exp(), -energy * t),
            TimeStep::Imaginary(t) => Complex64::new((-energy * t).exp(), 0.0),
        }
    }
}

/// `exp(−i·mass_factor·k²·dt)` per wavenumber of `grid`; real decays in imaginary time.
///
/// `mass_factor` is the coefficient of `−∂²` in the kinetic operator.
pub fn kinetic_phase_factors(
    grid: &UniformGrid,
    mass_factor: f64,
    step: TimeStep,
) -> Vec<Complex64> {
    grid.wavenumbers()
        .iter()
        .map(|k| step.factor(mass_factor * k * k, 0.0))
        .collect()
}

/// Planned forward/inverse FFT pair of one length.
///
/// The forward transform is unnormalised and the inverse carries `1/n`, so
/// `inverse(forward(x)) = x`. Buffers whose length is a multiple of `n` are
/// transformed line by line.
#[derive(Clone)]
pub struct FourierTransform {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierTransform")
            .field("n", &self.n)
            .finish()
    }
}

impl FourierTransform {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    pub fn make_scratch(&self) -> Vec<Complex64> {
        vec![Complex64::default(); self.scratch_len()]
    }

    pub fn forward(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(data, scratch);
    }

    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, scratch);
        let scale = 1.0 / self.n as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Inverse transform without the `1/n`, for callers that fold it into their own factors.
    pub fn inverse_unnormalized(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, scratch);
    }

    /// Forward transform, multiply by `factors`, inverse transform, for every line in `data`.
    pub fn apply_diagonal(
        &self,
        data: &mut [Complex64],
        factors: &[Complex64],
        scratch: &mut [Complex64],
    ) {
        debug_assert_eq!(factors.len(), self.n);
        let scale = 1.0 / self.n as f64;
        for line in data.chunks_exact_mut(self.n) {
            self.forward.process_with_scratch(line, scratch);
            line.iter_mut()
                .zip(factors)
                .for_each(|(c, f)| *c *= f * scale);
            self.inverse.process_with_scratch(line, scratch);
        }
    }
}

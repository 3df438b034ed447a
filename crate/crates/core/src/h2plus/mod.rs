//! Non-Born–Oppenheimer H₂⁺ in cylindrical electron coordinates (ρ, z) and
//! the internuclear distance R, with the field along the molecular axis.
//!
//! The Hamiltonian is
//! `H = −β(∂²_z + ∂²_ρ + ρ⁻¹∂_ρ) − M_p⁻¹ ∂²_R + V(ρ, z, R) + κ z F(t)`,
//! `β = ½ + 1/(4M_p)`, `κ = 1 + 1/(2M_p + 1)`, with the unsoftened two-centre
//! Coulomb potential `V`. The electron lives in a cylinder of radius ρ₀ with
//! a hard wall (discrete Bessel basis); z and R are periodic Fourier grids
//! with quadratic imaginary absorbers at their outer edges.
//!
//! Wavefunctions are stored on the grid as weighted values
//! `c = √(2π w_m Δz ΔR) ψ(R_i, ρ_m, z_j)` in an `(R, ρ, z)` array, so the norm
//! is the plain sum of `|c|²` and the spectral transforms are unitary.

mod checkpoint;
mod propagator;

use std::f64::consts::PI;

use ndarray::Array3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, Result};
use crate::spectral::{BesselBasis, UniformGrid};

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CheckpointHeader};
pub use propagator::{
    propagate_h2_realization, relax_h2_ground_state, resume_h2_realization, CheckpointPolicy,
    H2Propagator, H2RelaxOptions, H2Run, PropagateH2Options, H2_COLUMNS,
};

/// Proton mass in electron masses.
pub const PROTON_MASS: f64 = 1836.152673;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Params {
    pub proton_mass: f64,
}

impl Default for H2Params {
    fn default() -> Self {
        Self {
            proton_mass: PROTON_MASS,
        }
    }
}

impl H2Params {
    pub fn validate(&self) -> Result<()> {
        if !(self.proton_mass > 0.0 && self.proton_mass.is_finite()) {
            return Err(domain(
                "proton_mass",
                format!("must be > 0, got {}", self.proton_mass),
            ));
        }
        Ok(())
    }

    /// Electron kinetic prefactor `½ + 1/(4M_p)`.
    pub fn beta(&self) -> f64 {
        0.5 + 0.25 / self.proton_mass
    }

    /// Field coupling `1 + 1/(2M_p + 1)`.
    pub fn kappa(&self) -> f64 {
        1.0 + 1.0 / (2.0 * self.proton_mass + 1.0)
    }

    /// Coefficient of `−∂²_R`.
    pub fn vib_mass_factor(&self) -> f64 {
        1.0 / self.proton_mass
    }
}

/// Quadratic imaginary absorbers `η((|z| − z_a)/(z_max − z_a))²` and
/// `η_R((R − R_a)/(R_max − R_a))²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Absorber {
    pub z_onset: f64,
    pub z_strength: f64,
    pub r_onset: f64,
    pub r_strength: f64,
}

impl Default for H2Absorber {
    fn default() -> Self {
        Self {
            z_onset: 40.0,
            z_strength: 2.0,
            r_onset: 21.0,
            r_strength: 0.2,
        }
    }
}

impl H2Absorber {
    pub fn off() -> Self {
        Self {
            z_strength: 0.0,
            r_strength: 0.0,
            ..Self::default()
        }
    }
}

/// The numbers that fully determine an [`H2Geometry`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2GridSpec {
    pub z_points: usize,
    /// The z grid spans `[−z_max, z_max)`.
    pub z_max: f64,
    pub r_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub n_modes: usize,
    pub rho_max: f64,
    pub z_ionization: f64,
    pub r_dissociation: f64,
    pub absorber: H2Absorber,
}

impl Default for H2GridSpec {
    fn default() -> Self {
        Self {
            z_points: 1024,
            z_max: 50.0,
            r_points: 256,
            r_min: 0.38,
            r_max: 24.0,
            n_modes: 16,
            rho_max: 8.0,
            z_ionization: 32.0,
            r_dissociation: 9.5,
            absorber: H2Absorber::default(),
        }
    }
}

impl H2GridSpec {
    /// Coarse grids for quick studies: 256 z-points, 64 R-points, 8 modes.
    pub fn reduced() -> Self {
        Self {
            z_points: 256,
            r_points: 64,
            n_modes: 8,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct H2Geometry {
    spec: H2GridSpec,
    z: UniformGrid,
    r: UniformGrid,
    rho: BesselBasis,
}

impl H2Geometry {
    pub fn new(spec: H2GridSpec) -> Result<Self> {
        let z = UniformGrid::new(spec.z_points, -spec.z_max, spec.z_max)?;
        if !(spec.r_min > 0.0) {
            return Err(domain(
                "r_min",
                "must be > 0 (the Coulomb repulsion is singular at R = 0)",
            ));
        }
        let r = UniformGrid::new(spec.r_points, spec.r_min, spec.r_max)?;
        let rho = BesselBasis::new(spec.n_modes, spec.rho_max)?;
        if !(spec.z_ionization > 0.0 && spec.z_ionization < spec.z_max) {
            return Err(domain("z_ionization", "must lie in (0, z_max)"));
        }
        if !(spec.r_dissociation > spec.r_min && spec.r_dissociation < spec.r_max) {
            return Err(domain("r_dissociation", "must lie in (r_min, r_max)"));
        }
        let a = spec.absorber;
        if !(a.z_onset > 0.0 && a.z_onset < spec.z_max) {
            return Err(domain("z_onset", "must lie in (0, z_max)"));
        }
        if !(a.r_onset > spec.r_min && a.r_onset < spec.r_max) {
            return Err(domain("r_onset", "must lie in (r_min, r_max)"));
        }
        if !(a.z_strength >= 0.0) {
            return Err(domain("z_strength", "must be >= 0"));
        }
        if !(a.r_strength >= 0.0) {
            return Err(domain("r_strength", "must be >= 0"));
        }
        Ok(Self { spec, z, r, rho })
    }

    /// The default 1024 × 256 × 16 grids.
    pub fn full() -> Self {
        Self::new(H2GridSpec::default()).expect("default grids are valid")
    }

    pub fn spec(&self) -> &H2GridSpec {
        &self.spec
    }

    pub fn z(&self) -> &UniformGrid {
        &self.z
    }

    pub fn r(&self) -> &UniformGrid {
        &self.r
    }

    pub fn rho(&self) -> &BesselBasis {
        &self.rho
    }

    /// `(R points, Bessel modes, z points)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.r.len(), self.rho.n_modes(), self.z.len())
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.rho.n_modes() * self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// SHA-256 of the canonical JSON form of the grid specification.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.spec).expect("plain numbers serialise");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn z_absorber(&self) -> Vec<f64> {
        let a = self.spec.absorber;
        let width = self.spec.z_max - a.z_onset;
        self.z
            .points()
            .iter()
            .map(|z| {
                let d = z.abs() - a.z_onset;
                if d > 0.0 {
                    a.z_strength * (d / width).powi(2)
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn r_absorber(&self) -> Vec<f64> {
        let a = self.spec.absorber;
        let width = self.spec.r_max - a.r_onset;
        self.r
            .points()
            .iter()
            .map(|r| {
                let d = r - a.r_onset;
                if d > 0.0 {
                    a.r_strength * (d / width).powi(2)
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Grid weight `√(2π w_m Δz ΔR)` linking stored values to ψ.
    fn sample_weights(&self) -> Vec<f64> {
        let cell = 2.0 * PI * self.z.spacing() * self.r.spacing();
        self.rho
            .weights()
            .iter()
            .map(|w| (cell * w).sqrt())
            .collect()
    }
}

/// Two-centre Coulomb attraction plus nuclear repulsion.
pub fn coulomb_potential(rho: f64, z: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain("R", format!("must be > 0, got {r}")));
    }
    let rho2 = rho * rho;
    let da = (rho2 + (z - 0.5 * r).powi(2)).sqrt();
    let db = (rho2 + (z + 0.5 * r).powi(2)).sqrt();
    if da == 0.0 || db == 0.0 {
        return Err(domain("rho", "evaluated on a nucleus"));
    }
    Ok(-1.0 / da - 1.0 / db + 1.0 / r)
}

/// Ψ on the `(R, ρ, z)` grid of an [`H2Geometry`].
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionH2 {
    pub values: Array3<Complex64>,
    pub time: f64,
}

impl WavefunctionH2 {
    pub fn zeros(geometry: &H2Geometry) -> Self {
        Self {
            values: Array3::zeros(geometry.shape()),
            time: 0.0,
        }
    }

    /// Samples `f(R, ρ, z)` (the plain wavefunction) onto the weighted grid representation.
    pub fn from_fn(geometry: &H2Geometry, f: impl Fn(f64, f64, f64) -> Complex64) -> Self {
        let rs = geometry.r.points();
        let zs = geometry.z.points();
        let rhos = geometry.rho.points();
        let weights = geometry.sample_weights();
        let values = Array3::from_shape_fn(geometry.shape(), |(i, m, j)| {
            f(rs[i], rhos[m], zs[j]) * weights[m]
        });
        Self { values, time: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(&mut self) {
        let s = 1.0 / self.norm().sqrt();
        self.values.mapv_inplace(|c| c * s);
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest `|ψ(z) − ψ(−z)|` relative to the largest `|ψ|`.
    pub fn z_parity_defect(&self) -> f64 {
        let (nr, nm, nz) = self.values.dim();
        let mut defect: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for i in 0..nr {
            for m in 0..nm {
                for j in 0..nz {
                    let a = self.values[[i, m, j]];
                    let b = self.values[[i, m, (nz - j) % nz]];
                    defect = defect.max((a - b).norm());
                    peak = peak.max(a.norm());
                }
            }
        }
        defect / peak
    }

    /// Marginal density in R: `Σ_{ρ,z} |c|² / ΔR` at each R point.
    pub fn r_density(&self, geometry: &H2Geometry) -> Vec<f64> {
        let dr = geometry.r.spacing();
        self.values
            .outer_iter()
            .map(|block| block.iter().map(Complex64::norm_sqr).sum::<f64>() / dr)
            .collect()
    }

    /// `⟨R⟩` under the normalised density.
    pub fn mean_r(&self, geometry: &H2Geometry) -> f64 {
        let density = self.r_density(geometry);
        let total: f64 = density.iter().sum();
        geometry
            .r
            .points()
            .iter()
            .zip(&density)
            .map(|(r, p)| r * p)
            .sum::<f64>()
            / total
    }
}

/// Overlap of the cell `[x − h/2, x + h/2]` with `[lo, hi]`, as a fraction of `h`.
fn cell_fraction(x: f64, h: f64, lo: f64, hi: f64) -> f64 {
    let a = (x - 0.5 * h).max(lo);
    let b = (x + 0.5 * h).min(hi);
    ((b - a) / h).clamp(0.0, 1.0)
}

/// Density in R of the part of Ψ inside the cylinder `|z| ≤ z_I + R/2`, `ρ ≤ ρ₀`.
///
/// Boundary z cells count with the fraction of the cell inside the window.
pub fn f1_profile(psi: &WavefunctionH2, geometry: &H2Geometry) -> Vec<f64> {
    let zs = geometry.z.points();
    let dz = geometry.z.spacing();
    let dr = geometry.r.spacing();
    let z_i = geometry.spec.z_ionization;
    geometry
        .r
        .points()
        .iter()
        .zip(psi.values.outer_iter())
        .map(|(&r, block)| {
            let half = z_i + 0.5 * r;
            let window: Vec<f64> = zs
                .iter()
                .map(|&z| cell_fraction(z, dz, -half, half))
                .collect();
            block
                .outer_iter()
                .map(|line| {
                    line.iter()
                        .zip(&window)
                        .map(|(c, w)| w * c.norm_sqr())
                        .sum::<f64>()
                })
                .sum::<f64>()
                / dr
        })
        .collect()
}

/// `1 − ∫ f₁ dR` over the whole R grid, clamped to [0, 1] against rounding.
pub fn ionization_probability(f1: &[f64], geometry: &H2Geometry) -> f64 {
    (1.0 - f1.iter().sum::<f64>() * geometry.r.spacing()).clamp(0.0, 1.0)
}

/// `∫_{R_D} f₁ dR`, with the cell containing R_D counted fractionally.
pub fn dissociation_probability(f1: &[f64], geometry: &H2Geometry) -> f64 {
    let dr = geometry.r.spacing();
    let rd = geometry.spec.r_dissociation;
    geometry
        .r
        .points()
        .iter()
        .zip(f1)
        .map(|(&r, f)| cell_fraction(r, dr, rd, f64::INFINITY) * f)
        .sum::<f64>()
        * dr
}

/// Product guess: a Gaussian in R around 2 a.u. times a symmetric pair of
/// Gaussians on the two nuclei.
pub fn initial_guess(geometry: &H2Geometry) -> WavefunctionH2 {
    product_guess(geometry, 2.0, 4.8)
}

/// `exp(−a(R − r_center)²)` times the two-centre Gaussian, normalised.
pub fn product_guess(geometry: &H2Geometry, r_center: f64, a: f64) -> WavefunctionH2 {
    let mut psi = WavefunctionH2::from_fn(geometry, |r, rho, z| {
        let vib = (-a * (r - r_center).powi(2)).exp();
        let rho2 = rho * rho;
        let elec = (-0.5 * (rho2 + (z - 0.5 * r).powi(2))).exp()
            + (-0.5 * (rho2 + (z + 0.5 * r).powi(2))).exp();
        Complex64::new(vib * elec, 0.0)
    });
    psi.normalize();
    psi
}

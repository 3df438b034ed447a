//! Run configuration: one TOML document per run.
//!
//! Every key has a default, so an empty file is a complete configuration.
//! [`SimConfig::to_toml`] writes the fully materialised form, which parses
//! back to the same value and serialises to the same bytes.

use std::path::PathBuf;

use noisemol::h2plus::{H2Absorber, H2GridSpec, H2Params, H2RelaxOptions};
use noisemol::qdyn1d::{Absorber1D, MorseParams, RelaxOptions, SoftCoreParams};
use noisemol::spectral::UniformGrid;
use noisemol::units::{fs_to_au, ELECTRON_PERIOD};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSelector {
    Atom1d,
    Morse1d,
    H2plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub model: ModelSelector,
    pub out_dir: PathBuf,
    /// Propagation steps between records.
    pub record_every: usize,
    pub noise: NoiseSection,
    pub ensemble: EnsembleSection,
    pub validate: ValidateSection,
    pub atom1d: AtomSection,
    pub morse1d: MorseSection,
    pub h2plus: H2Section,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            model: ModelSelector::H2plus,
            out_dir: PathBuf::from("runs/default"),
            record_every: 20,
            noise: NoiseSection::default(),
            ensemble: EnsembleSection::default(),
            validate: ValidateSection::default(),
            atom1d: AtomSection::default(),
            morse1d: MorseSection::default(),
            h2plus: H2Section::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    /// Mean kick strength γ (a.u.).
    pub gamma_mean: f64,
    /// Mean kick interval in units of the electronic period T_e = 2π a.u.
    pub spacing_over_te: f64,
    pub final_time_fs: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            gamma_mean: 0.9,
            spacing_over_te: 1.0,
            final_time_fs: 100.0,
        }
    }
}

impl NoiseSection {
    pub fn dt_mean_au(&self) -> f64 {
        self.spacing_over_te * ELECTRON_PERIOD
    }

    pub fn final_time_au(&self) -> f64 {
        fs_to_au(self.final_time_fs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub n_realizations: usize,
    pub master_seed: u64,
    pub workers: usize,
    /// Also write every realization's series.
    pub keep_realizations: bool,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self {
            n_realizations: 20,
            master_seed: 20_240_901,
            workers: 1,
            keep_realizations: false,
        }
    }
}

/// Settings of the noise self-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    pub n_samples: usize,
    pub horizon_au: f64,
    /// Width of the time bins used for the autocovariance (a.u.).
    pub bin_width_au: f64,
    pub max_lag: usize,
    pub spectrum_bins: usize,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            horizon_au: 1000.0,
            bin_width_au: 1.0,
            max_lag: 50,
            spectrum_bins: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomSection {
    /// Soft-core parameter a in −1/√(x² + a).
    pub softcore_a: f64,
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Width of each absorbing strip as a fraction of the box.
    pub absorber_fraction: f64,
    pub absorber_strength: f64,
    pub dt: f64,
    pub dt_imag: f64,
}

impl Default for AtomSection {
    fn default() -> Self {
        Self {
            softcore_a: 2.0,
            points: 2048,
            x_min: -200.0,
            x_max: 200.0,
            absorber_fraction: 0.15,
            absorber_strength: 0.1,
            dt: 0.05,
            dt_imag: 0.05,
        }
    }
}

impl AtomSection {
    pub fn params(&self) -> SoftCoreParams {
        SoftCoreParams { a: self.softcore_a }
    }

    pub fn grid(&self) -> Result<UniformGrid, CliError> {
        grid("atom1d", self.points, self.x_min, self.x_max)
    }

    pub fn absorber(&self) -> Absorber1D {
        let w = self.absorber_fraction * (self.x_max - self.x_min);
        Absorber1D {
            left_width: w,
            right_width: w,
            strength: self.absorber_strength,
        }
    }

    pub fn relax_options(&self) -> RelaxOptions {
        RelaxOptions {
            dt_imag: self.dt_imag,
            ..RelaxOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MorseSection {
    pub depth: f64,
    pub alpha: f64,
    pub mu0: f64,
    pub reduced_mass: f64,
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Width of the right absorbing strip as a fraction of the box.
    pub absorber_fraction: f64,
    pub absorber_strength: f64,
    pub dt: f64,
}

impl Default for MorseSection {
    fn default() -> Self {
        let p = MorseParams::hf();
        Self {
            depth: p.depth,
            alpha: p.alpha,
            mu0: p.mu0,
            reduced_mass: p.reduced_mass,
            points: 1024,
            x_min: -2.0,
            x_max: 12.0,
            absorber_fraction: 0.15,
            absorber_strength: 0.05,
            dt: 0.05,
        }
    }
}

impl MorseSection {
    pub fn params(&self) -> MorseParams {
        MorseParams {
            depth: self.depth,
            alpha: self.alpha,
            mu0: self.mu0,
            reduced_mass: self.reduced_mass,
        }
    }

    pub fn grid(&self) -> Result<UniformGrid, CliError> {
        grid("morse1d", self.points, self.x_min, self.x_max)
    }

    pub fn absorber(&self) -> Absorber1D {
        Absorber1D {
            left_width: 0.0,
            right_width: self.absorber_fraction * (self.x_max - self.x_min),
            strength: self.absorber_strength,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct H2Section {
    pub proton_mass: f64,
    pub dt: f64,
    pub z_points: usize,
    pub z_max: f64,
    pub r_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub n_modes: usize,
    pub rho_max: f64,
    pub z_ionization: f64,
    pub r_dissociation: f64,
    pub z_absorber_onset: f64,
    pub z_absorber_strength: f64,
    pub r_absorber_onset: f64,
    pub r_absorber_strength: f64,
    pub relax_dt_imag: f64,
    pub relax_tol: f64,
    pub relax_max_steps: usize,
}

impl Default for H2Section {
    fn default() -> Self {
        let g = H2GridSpec::default();
        let r = H2RelaxOptions::default();
        Self {
            proton_mass: H2Params::default().proton_mass,
            dt: 0.05,
            z_points: g.z_points,
            z_max: g.z_max,
            r_points: g.r_points,
            r_min: g.r_min,
            r_max: g.r_max,
            n_modes: g.n_modes,
            rho_max: g.rho_max,
            z_ionization: g.z_ionization,
            r_dissociation: g.r_dissociation,
            z_absorber_onset: g.absorber.z_onset,
            z_absorber_strength: g.absorber.z_strength,
            r_absorber_onset: g.absorber.r_onset,
            r_absorber_strength: g.absorber.r_strength,
            relax_dt_imag: r.dt_imag,
            relax_tol: r.tol,
            relax_max_steps: r.max_steps,
        }
    }
}

impl H2Section {
    pub fn params(&self) -> H2Params {
        H2Params {
            proton_mass: self.proton_mass,
        }
    }

    pub fn grid_spec(&self) -> H2GridSpec {
        H2GridSpec {
            z_points: self.z_points,
            z_max: self.z_max,
            r_points: self.r_points,
            r_min: self.r_min,
            r_max: self.r_max,
            n_modes: self.n_modes,
            rho_max: self.rho_max,
            z_ionization: self.z_ionization,
            r_dissociation: self.r_dissociation,
            absorber: H2Absorber {
                z_onset: self.z_absorber_onset,
                z_strength: self.z_absorber_strength,
                r_onset: self.r_absorber_onset,
                r_strength: self.r_absorber_strength,
            },
        }
    }

    pub fn relax_options(&self) -> H2RelaxOptions {
        H2RelaxOptions {
            dt_imag: self.relax_dt_imag,
            tol: self.relax_tol,
            max_steps: self.relax_max_steps,
            ..H2RelaxOptions::default()
        }
    }
}

fn grid(section: &str, points: usize, lo: f64, hi: f64) -> Result<UniformGrid, CliError> {
    UniformGrid::new(points, lo, hi).map_err(|e| CliError::Config(format!("{section}: {e}")))
}

fn check(ok: bool, key: &str, value: impl std::fmt::Display, rule: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("key `{key}` = {value}: {rule}")))
    }
}

fn positive(key: &str, v: f64) -> Result<(), CliError> {
    check(
        v > 0.0 && v.is_finite(),
        key,
        v,
        "must be a finite number > 0",
    )
}

impl SimConfig {
    /// Parses and validates; errors carry the line or the offending key.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: SimConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Canonical form with every key written out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check(
            self.record_every >= 1,
            "record_every",
            self.record_every,
            "must be >= 1",
        )?;
        let n = &self.noise;
        positive("noise.gamma_mean", n.gamma_mean)?;
        positive("noise.spacing_over_te", n.spacing_over_te)?;
        check(
            n.final_time_fs >= 0.0 && n.final_time_fs.is_finite(),
            "noise.final_time_fs",
            n.final_time_fs,
            "must be a finite number >= 0",
        )?;
        let e = &self.ensemble;
        check(
            e.n_realizations >= 1,
            "ensemble.n_realizations",
            e.n_realizations,
            "must be >= 1",
        )?;
        check(
            e.workers >= 1,
            "ensemble.workers",
            e.workers,
            "must be >= 1",
        )?;
        let v = &self.validate;
        check(
            v.n_samples >= 1000,
            "validate.n_samples",
            v.n_samples,
            "must be >= 1000",
        )?;
        check(
            v.horizon_au >= 0.0 && v.horizon_au.is_finite(),
            "validate.horizon_au",
            v.horizon_au,
            "must be a finite number >= 0",
        )?;
        positive("validate.bin_width_au", v.bin_width_au)?;
        check(
            v.max_lag >= 1,
            "validate.max_lag",
            v.max_lag,
            "must be >= 1",
        )?;
        check(
            v.spectrum_bins >= 4,
            "validate.spectrum_bins",
            v.spectrum_bins,
            "must be >= 4",
        )?;

        let a = &self.atom1d;
        positive("atom1d.softcore_a", a.softcore_a)?;
        positive("atom1d.dt", a.dt)?;
        positive("atom1d.dt_imag", a.dt_imag)?;
        check(
            (0.0..0.5).contains(&a.absorber_fraction),
            "atom1d.absorber_fraction",
            a.absorber_fraction,
            "must lie in [0, 0.5)",
        )?;
        check(
            a.absorber_strength >= 0.0,
            "atom1d.absorber_strength",
            a.absorber_strength,
            "must be >= 0",
        )?;
        a.grid()?;

        let m = &self.morse1d;
        m.params()
            .validate()
            .map_err(|e| CliError::Config(format!("morse1d: {e}")))?;
        positive("morse1d.dt", m.dt)?;
        check(
            (0.0..1.0).contains(&m.absorber_fraction),
            "morse1d.absorber_fraction",
            m.absorber_fraction,
            "must lie in [0, 1)",
        )?;
        check(
            m.absorber_strength >= 0.0,
            "morse1d.absorber_strength",
            m.absorber_strength,
            "must be >= 0",
        )?;
        m.grid()?;

        let h = &self.h2plus;
        positive("h2plus.dt", h.dt)?;
        positive("h2plus.relax_dt_imag", h.relax_dt_imag)?;
        positive("h2plus.relax_tol", h.relax_tol)?;
        h.params()
            .validate()
            .map_err(|e| CliError::Config(format!("h2plus: {e}")))?;
        noisemol::h2plus::H2Geometry::new(h.grid_spec())
            .map_err(|e| CliError::Config(format!("h2plus: {e}")))?;
        Ok(())
    }

    /// Real-time step of the selected model.
    pub fn dt(&self) -> f64 {
        match self.model {
            ModelSelector::Atom1d => self.atom1d.dt,
            ModelSelector::Morse1d => self.morse1d.dt,
            ModelSelector::H2plus => self.h2plus.dt,
        }
    }
}

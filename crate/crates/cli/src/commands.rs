//! The five subcommands. Each writes a run directory holding the
//! materialised configuration, the seed manifest, a version stamp and CSVs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use noisemol::ensemble::{derive_seed, run_ensemble, EnsembleResult, EnsembleSpec};
use noisemol::h2plus::{
    f1_profile, relax_h2_ground_state, H2Geometry, H2Propagator, PropagateH2Options, WavefunctionH2,
};
use noisemol::observables::ObservableSeries;
use noisemol::qdyn1d::{Model1D, PropagateOptions};
use noisemol::shotnoise::{noise_statistics, sample_kicks, NoiseParams, NoiseStatistics};
use noisemol::spectral::TimeStep;
use noisemol::units::FS_PER_AU;

use crate::config::{ModelSelector, SimConfig};
use crate::CliError;

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub final_time_fs: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, mut config: SimConfig) -> Result<SimConfig, CliError> {
        if let Some(w) = self.workers {
            config.ensemble.workers = w;
        }
        if let Some(out) = &self.out_dir {
            config.out_dir = out.clone();
        }
        if let Some(s) = self.seed {
            config.ensemble.master_seed = s;
        }
        if let Some(t) = self.final_time_fs {
            config.noise.final_time_fs = t;
        }
        config.validate()?;
        Ok(config)
    }
}

/// The swept parameter of `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Mean kick interval over T_e.
    Spacing,
    /// Mean kick strength.
    Gamma,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Spacing => "spacing_over_te",
            SweepAxis::Gamma => "gamma_mean",
        }
    }

    fn set(self, config: &mut SimConfig, value: f64) {
        match self {
            SweepAxis::Spacing => config.noise.spacing_over_te = value,
            SweepAxis::Gamma => config.noise.gamma_mean = value,
        }
    }
}

/// Parses `name:v1,v2,...` with name `spacing` (or `spacing_over_te`) or `gamma` (or `gamma_mean`).
pub fn parse_axis(text: &str) -> Result<(SweepAxis, Vec<f64>), CliError> {
    let bad = |why: &str| CliError::Config(format!("--axis `{text}`: {why}"));
    let (name, values) = text
        .split_once(':')
        .ok_or_else(|| bad("expected name:v1,v2,..."))?;
    let axis = match name.trim() {
        "spacing" | "spacing_over_te" => SweepAxis::Spacing,
        "gamma" | "gamma_mean" => SweepAxis::Gamma,
        other => {
            return Err(bad(&format!(
                "unknown axis `{other}` (use spacing or gamma)"
            )))
        }
    };
    let values = values
        .split(',')
        .map(|v| {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| bad(&format!("`{v}` is not a number")))?;
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(bad(&format!("{x} must be a finite number > 0")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((axis, values))
}

enum Engine {
    OneD {
        model: Model1D,
        opts: PropagateOptions,
    },
    H2 {
        geometry: H2Geometry,
        prop: H2Propagator,
        ground: WavefunctionH2,
        opts: PropagateH2Options,
    },
}

/// A model with its ground state, ready to run realizations.
struct Prepared {
    engine: Engine,
    noise: NoiseParams,
    ground_energy: f64,
}

fn prepare(config: &SimConfig) -> Result<Prepared, CliError> {
    let final_time = config.noise.final_time_au();
    let noise = NoiseParams {
        gamma_mean: config.noise.gamma_mean,
        dt_mean: config.noise.dt_mean_au(),
        horizon: final_time,
        seed: config.ensemble.master_seed,
    };
    let one_d = |model: Model1D, dt: f64| {
        let ground_energy = model.ground_energy;
        Prepared {
            engine: Engine::OneD {
                model,
                opts: PropagateOptions {
                    dt,
                    final_time,
                    record_every: config.record_every,
                    seed: None,
                },
            },
            noise,
            ground_energy,
        }
    };
    Ok(match config.model {
        ModelSelector::Atom1d => {
            let a = &config.atom1d;
            let model = Model1D::atom(a.params(), a.grid()?, a.absorber(), &a.relax_options())?;
            one_d(model, a.dt)
        }
        ModelSelector::Morse1d => {
            let m = &config.morse1d;
            let model = Model1D::morse(m.params(), m.grid()?, m.absorber())?;
            one_d(model, m.dt)
        }
        ModelSelector::H2plus => {
            let h = &config.h2plus;
            let geometry = H2Geometry::new(h.grid_spec())?;
            let (ground, ground_energy) =
                relax_h2_ground_state(h.params(), &geometry, &h.relax_options())?;
            let prop = H2Propagator::new(h.params(), &geometry, TimeStep::Real(h.dt))?;
            Prepared {
                engine: Engine::H2 {
                    geometry,
                    prop,
                    ground,
                    opts: PropagateH2Options::new(h.dt, final_time, config.record_every),
                },
                noise,
                ground_energy,
            }
        }
    })
}

impl Prepared {
    fn realization(&self, seed: u64) -> noisemol::Result<ObservableSeries> {
        let kicks = sample_kicks(&NoiseParams { seed, ..self.noise })?;
        match &self.engine {
            Engine::OneD { model, opts } => model.run(
                &kicks,
                &PropagateOptions {
                    seed: Some(seed),
                    ..*opts
                },
            ),
            Engine::H2 {
                prop, ground, opts, ..
            } => {
                let mut psi = ground.clone();
                let opts = PropagateH2Options {
                    seed: Some(seed),
                    ..opts.clone()
                };
                Ok(prop.propagate(&mut psi, &kicks, &opts)?.series)
            }
        }
    }

    fn ensemble(&self, config: &SimConfig) -> noisemol::Result<EnsembleResult> {
        let e = &config.ensemble;
        let spec = EnsembleSpec {
            n_realizations: e.n_realizations,
            master_seed: e.master_seed,
            workers: e.workers,
            keep_realizations: e.keep_realizations,
        };
        run_ensemble(&spec, &|_: usize, seed: u64| self.realization(seed))
    }

    /// Observables reported by `sweep`.
    fn key_columns(&self) -> [&'static str; 2] {
        match self.engine {
            Engine::OneD { .. } => ["survival", "norm"],
            Engine::H2 { .. } => ["p_ionization", "p_dissociation"],
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_err(&path))?;
    Ok(path)
}

/// Creates the run directory with the configuration and version stamp.
fn open_run_dir(config: &SimConfig, command: &str) -> Result<PathBuf, CliError> {
    let dir = config.out_dir.clone();
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    write(&dir, "config.toml", &config.to_toml())?;
    let stamp = format!(
        "noisemol {}\ncommand {command}\nfs_per_au {FS_PER_AU}\nproton_mass {}\n",
        noisemol::VERSION,
        config.h2plus.proton_mass
    );
    write(&dir, "VERSION", &stamp)?;
    Ok(dir)
}

fn single_seed_manifest(master: u64, seed: u64) -> String {
    format!("# master_seed {master}\n# index seed\n0 {seed}\n")
}

/// Outcome of `relax`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxReport {
    pub energy: f64,
    /// Vibrationally averaged R for H₂⁺.
    pub mean_r: Option<f64>,
    pub dir: PathBuf,
}

/// Prepares the ground state and writes its energy and density.
pub fn cmd_relax(config: &SimConfig) -> Result<RelaxReport, CliError> {
    let prepared = prepare(config)?;
    let dir = open_run_dir(config, "relax")?;
    let mut csv = String::new();
    let mean_r = match &prepared.engine {
        Engine::OneD { model, .. } => {
            csv.push_str("x_au,density\n");
            let psi = &model.ground_state;
            let x = psi.grid.points();
            let dx = psi.grid.spacing();
            for (x, c) in x.iter().zip(&psi.amplitudes) {
                writeln!(csv, "{x:.16e},{:.16e}", c.norm_sqr() / dx).expect("write to String");
            }
            None
        }
        Engine::H2 {
            geometry, ground, ..
        } => {
            csv.push_str("r_au,f1\n");
            for (r, f) in geometry
                .r()
                .points()
                .iter()
                .zip(f1_profile(ground, geometry))
            {
                writeln!(csv, "{r:.16e},{f:.16e}").expect("write to String");
            }
            Some(ground.mean_r(geometry))
        }
    };
    write(&dir, "ground_state.csv", &csv)?;
    let mut summary = format!("energy_au = {:.16e}\n", prepared.ground_energy);
    if let Some(r) = mean_r {
        writeln!(summary, "mean_r_au = {r:.16e}").expect("write to String");
    }
    write(&dir, "relax.txt", &summary)?;
    Ok(RelaxReport {
        energy: prepared.ground_energy,
        mean_r,
        dir,
    })
}

/// One realization: the first member of the configured ensemble.
pub fn cmd_run(config: &SimConfig) -> Result<ObservableSeries, CliError> {
    let prepared = prepare(config)?;
    let dir = open_run_dir(config, "run")?;
    let master = config.ensemble.master_seed;
    let seed = derive_seed(master, 0);
    write(&dir, "seeds.txt", &single_seed_manifest(master, seed))?;
    let kicks = sample_kicks(&NoiseParams {
        seed,
        ..prepared.noise
    })?;
    write(&dir, "kicks.txt", &kicks.to_text())?;
    let series = prepared.realization(seed)?;
    write(&dir, "series.csv", &series.to_csv())?;
    Ok(series)
}

/// The configured ensemble, averaged.
pub fn cmd_ensemble(config: &SimConfig) -> Result<EnsembleResult, CliError> {
    let prepared = prepare(config)?;
    let dir = open_run_dir(config, "ensemble")?;
    let result = match prepared.ensemble(config) {
        Ok(r) => r,
        Err(e) => {
            let seeds =
                EnsembleSpec::new(config.ensemble.n_realizations, config.ensemble.master_seed);
            write(&dir, "seeds.txt", &manifest_for(&seeds))?;
            return Err(e.into());
        }
    };
    write_ensemble(&dir, &result)?;
    Ok(result)
}

fn manifest_for(spec: &EnsembleSpec) -> String {
    let mut out = format!("# master_seed {}\n# index seed\n", spec.master_seed);
    for (j, s) in spec.seeds().iter().enumerate() {
        writeln!(out, "{j} {s}").expect("write to String");
    }
    out
}

fn write_ensemble(dir: &Path, result: &EnsembleResult) -> Result<(), CliError> {
    write(dir, "seeds.txt", &result.seed_manifest())?;
    write(dir, "mean.csv", &result.to_csv())?;
    if let Some(all) = &result.realizations {
        let sub = dir.join("realizations");
        fs::create_dir_all(&sub).map_err(io_err(&sub))?;
        for (j, s) in all.iter().enumerate() {
            write(&sub, &format!("{j:04}.csv"), &s.to_csv())?;
        }
    }
    Ok(())
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// `(column, mean, standard error)` at the final record.
    pub finals: Vec<(String, f64, f64)>,
}

/// One ensemble per axis value; every point uses the same master seed.
pub fn cmd_sweep(
    config: &SimConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    if values.is_empty() {
        return Err(CliError::Config("--axis needs at least one value".into()));
    }
    let dir = open_run_dir(config, "sweep")?;
    let spec = EnsembleSpec::new(config.ensemble.n_realizations, config.ensemble.master_seed);
    write(&dir, "seeds.txt", &manifest_for(&spec))?;
    let mut prepared = prepare(config)?;
    let mut rows = Vec::with_capacity(values.len());
    let mut header = String::new();
    let mut table = String::new();
    for &value in values {
        let mut point = config.clone();
        axis.set(&mut point, value);
        point
            .validate()
            .map_err(|e| CliError::Config(format!("{} = {value}: {e}", axis.name())))?;
        prepared.noise.gamma_mean = point.noise.gamma_mean;
        prepared.noise.dt_mean = point.noise.dt_mean_au();
        let result = prepared.ensemble(&point).map_err(|e| match e {
            noisemol::Error::PartialEnsemble { total, mut failed } => {
                for f in &mut failed {
                    f.message = format!("{} = {value}: {}", axis.name(), f.message);
                }
                CliError::Engine(noisemol::Error::PartialEnsemble { total, failed })
            }
            other => CliError::Engine(other),
        })?;
        let finals: Vec<(String, f64, f64)> = prepared
            .key_columns()
            .iter()
            .map(|c| {
                let m = result.mean.last(c).expect("column exists");
                let s = result.std_error.last(c).expect("column exists");
                (c.to_string(), m, s)
            })
            .collect();
        if header.is_empty() {
            header.push_str(axis.name());
            for (c, _, _) in &finals {
                write!(header, ",{c},{c}_stderr").expect("write to String");
            }
            header.push('\n');
        }
        write!(table, "{value:.16e}").expect("write to String");
        for (_, m, s) in &finals {
            write!(table, ",{m:.16e},{s:.16e}").expect("write to String");
        }
        table.push('\n');
        rows.push(SweepRow { value, finals });
    }
    write(&dir, "sweep.csv", &(header + &table))?;
    Ok(rows)
}

/// Checks the noise generator against its analytic moments.
pub fn cmd_validate_noise(config: &SimConfig) -> Result<NoiseStatistics, CliError> {
    let v = &config.validate;
    let params = NoiseParams {
        gamma_mean: config.noise.gamma_mean,
        dt_mean: config.noise.dt_mean_au(),
        horizon: v.horizon_au,
        seed: config.ensemble.master_seed,
    };
    let stats = noise_statistics(
        &params,
        v.n_samples,
        v.bin_width_au,
        v.max_lag,
        v.spectrum_bins,
    )?;
    let dir = open_run_dir(config, "validate-noise")?;
    write(&dir, "noise_report.txt", &stats.report())?;
    Ok(stats)
}

//! Split-operator propagation of H₂⁺ on the `(R, ρ, z)` grid.
//!
//! A kinetic step goes fully to spectral space, where all three kinetic
//! terms are diagonal: FFT along z (contiguous lines), the orthogonal Bessel
//! transform along ρ, then an FFT along R on a transposed copy. The
//! potential, absorbers and kick phases are diagonal on the grid.

use std::path::PathBuf;

use num_complex::Complex64;

use super::checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CheckpointHeader};
use super::{
    coulomb_potential, dissociation_probability, f1_profile, initial_guess, ionization_probability,
    product_guess, H2Geometry, H2Params, WavefunctionH2,
};
use crate::error::{domain, Error, Result};
use crate::observables::ObservableSeries;
use crate::propagation::{KickedClock, SplitOperator};
use crate::shotnoise::KickSequence;
use crate::spectral::{FourierTransform, TimeStep};

/// R blocks transposed together, so each transposed line receives a short contiguous run.
const R_TILE: usize = 8;

pub const H2_COLUMNS: [&str; 4] = ["norm", "p_ionization", "p_dissociation", "absorbed_r"];

/// Precomputed tables for one (params, geometry, time step); shareable across realizations.
pub struct H2Propagator {
    params: H2Params,
    geometry: H2Geometry,
    step: TimeStep,
    potential: Vec<f64>,
    wz: Vec<f64>,
    wr: Vec<f64>,
    zs: Vec<f64>,
    full: Vec<Complex64>,
    half: Vec<Complex64>,
    /// `β k_z²` and `β λ_m` energies, and `k_R²/M_p`.
    kz_energy: Vec<f64>,
    mode_energy: Vec<f64>,
    kr_energy: Vec<f64>,
    full_mz: Vec<Complex64>,
    full_r: Vec<Complex64>,
    fft_z: FourierTransform,
    fft_r: FourierTransform,
}

impl std::fmt::Debug for H2Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("H2Propagator")
            .field("params", &self.params)
            .field("shape", &self.geometry.shape())
            .field("step", &self.step)
            .finish()
    }
}

/// Per-realization buffers.
struct Workspace {
    transposed: Vec<Complex64>,
    tile: Vec<Complex64>,
    scratch_z: Vec<Complex64>,
    scratch_r: Vec<Complex64>,
}

impl H2Propagator {
    /// Imaginary steps ignore the absorbers.
    pub fn new(params: H2Params, geometry: &H2Geometry, step: TimeStep) -> Result<Self> {
        params.validate()?;
        if !(step.duration() > 0.0 && step.duration().is_finite()) {
            return Err(domain(
                "dt",
                format!("must be > 0, got {}", step.duration()),
            ));
        }
        let (nr, nm, nz) = geometry.shape();
        let rs = geometry.r().points();
        let zs = geometry.z().points();
        let rhos = geometry.rho().points().to_vec();
        let mut potential = Vec::with_capacity(geometry.len());
        for &r in &rs {
            for &rho in &rhos {
                for &z in &zs {
                    potential.push(coulomb_potential(rho, z, r)?);
                }
            }
        }
        let beta = params.beta();
        let kz_energy = geometry
            .z()
            .wavenumbers()
            .iter()
            .map(|k| beta * k * k)
            .collect();
        let mode_energy = geometry
            .rho()
            .eigenvalues()
            .iter()
            .map(|l| beta * l)
            .collect();
        let kr_energy = geometry
            .r()
            .wavenumbers()
            .iter()
            .map(|k| params.vib_mass_factor() * k * k)
            .collect();
        let mut prop = Self {
            params,
            geometry: geometry.clone(),
            step,
            potential,
            wz: geometry.z_absorber(),
            wr: geometry.r_absorber(),
            zs,
            full: Vec::new(),
            half: Vec::new(),
            kz_energy,
            mode_energy,
            kr_energy,
            full_mz: Vec::new(),
            full_r: Vec::new(),
            fft_z: FourierTransform::new(nz),
            fft_r: FourierTransform::new(nr),
        };
        let dt = step.duration();
        prop.full = prop.diagonal_factors(dt);
        prop.half = prop.diagonal_factors(0.5 * dt);
        let (mz, r) = prop.kinetic_factors(dt);
        prop.full_mz = mz;
        prop.full_r = r;
        debug_assert_eq!(prop.full.len(), nr * nm * nz);
        Ok(prop)
    }

    pub fn params(&self) -> &H2Params {
        &self.params
    }

    pub fn geometry(&self) -> &H2Geometry {
        &self.geometry
    }

    pub fn dt(&self) -> f64 {
        self.step.duration()
    }

    fn scaled_step(&self, duration: f64) -> TimeStep {
        self.step.scaled(duration / self.step.duration())
    }

    fn diagonal_factors(&self, tau: f64) -> Vec<Complex64> {
        let st = self.scaled_step(tau);
        let nz = self.zs.len();
        let nm = self.geometry.rho().n_modes();
        let mut out = Vec::with_capacity(self.potential.len());
        for (i, &wr) in self.wr.iter().enumerate() {
            let block = &self.potential[i * nm * nz..(i + 1) * nm * nz];
            for (idx, &v) in block.iter().enumerate() {
                out.push(st.factor(v, wr + self.wz[idx % nz]));
            }
        }
        out
    }

    /// Mode-space factors split as `(ρ-mode × k_z)` and `k_R`, with the FFT normalisation in the latter.
    fn kinetic_factors(&self, d: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let st = self.scaled_step(d);
        let scale = 1.0 / (self.zs.len() * self.kr_energy.len()) as f64;
        let mz = self
            .mode_energy
            .iter()
            .flat_map(|&em| self.kz_energy.iter().map(move |&ez| em + ez))
            .map(|e| st.factor(e, 0.0))
            .collect();
        let r = self
            .kr_energy
            .iter()
            .map(|&e| st.factor(e, 0.0) * scale)
            .collect();
        (mz, r)
    }

    fn workspace(&self) -> Workspace {
        let (_, nm, nz) = self.geometry.shape();
        Workspace {
            transposed: vec![Complex64::default(); self.geometry.len()],
            tile: vec![Complex64::default(); R_TILE * nm * nz],
            scratch_z: self.fft_z.make_scratch(),
            scratch_r: self.fft_r.make_scratch(),
        }
    }

    /// Grid → spectral space; the result is left in `ws.transposed` as `(m, k_z)` lines over `k_R`.
    fn to_spectral(&self, psi: &mut [Complex64], ws: &mut Workspace) {
        let (nr, nm, nz) = self.geometry.shape();
        self.fft_z.forward(psi, &mut ws.scratch_z);
        let qt = self.geometry.rho().forward_matrix();
        let block_len = nm * nz;
        for i0 in (0..nr).step_by(R_TILE) {
            let tile_r = R_TILE.min(nr - i0);
            for t in 0..tile_r {
                let i = i0 + t;
                mode_transform(
                    qt,
                    nm,
                    &psi[i * block_len..(i + 1) * block_len],
                    &mut ws.tile[t * block_len..(t + 1) * block_len],
                );
            }
            for line in 0..block_len {
                let dst = &mut ws.transposed[line * nr + i0..line * nr + i0 + tile_r];
                for (t, d) in dst.iter_mut().enumerate() {
                    *d = ws.tile[t * block_len + line];
                }
            }
        }
        self.fft_r.forward(&mut ws.transposed, &mut ws.scratch_r);
    }

    /// Inverse of [`Self::to_spectral`] without the FFT normalisation.
    fn from_spectral(&self, psi: &mut [Complex64], ws: &mut Workspace) {
        let (nr, nm, nz) = self.geometry.shape();
        self.fft_r
            .inverse_unnormalized(&mut ws.transposed, &mut ws.scratch_r);
        let q = self.geometry.rho().backward_matrix();
        let block_len = nm * nz;
        for i0 in (0..nr).step_by(R_TILE) {
            let tile_r = R_TILE.min(nr - i0);
            for line in 0..block_len {
                let src = &ws.transposed[line * nr + i0..line * nr + i0 + tile_r];
                for (t, s) in src.iter().enumerate() {
                    ws.tile[t * block_len + line] = *s;
                }
            }
            for t in 0..tile_r {
                let i = i0 + t;
                mode_transform(
                    q,
                    nm,
                    &ws.tile[t * block_len..(t + 1) * block_len],
                    &mut psi[i * block_len..(i + 1) * block_len],
                );
            }
        }
        self.fft_z.inverse_unnormalized(psi, &mut ws.scratch_z);
    }

    fn kinetic(&self, psi: &mut [Complex64], ws: &mut Workspace, d: f64) {
        let computed;
        let (mz, r) = if d == self.dt() {
            (&self.full_mz, &self.full_r)
        } else {
            computed = self.kinetic_factors(d);
            (&computed.0, &computed.1)
        };
        self.to_spectral(psi, ws);
        let nr = r.len();
        for (line, f) in ws.transposed.chunks_exact_mut(nr).zip(mz) {
            for (c, fr) in line.iter_mut().zip(r) {
                *c *= f * fr;
            }
        }
        self.from_spectral(psi, ws);
    }

    /// Returns the norm removed by the R absorber when `track_r` is set.
    fn diagonal(&self, psi: &mut [Complex64], tau: f64, impulse: f64, track_r: bool) -> f64 {
        let computed;
        let factors = if tau == self.dt() {
            &self.full
        } else if tau == 0.5 * self.dt() {
            &self.half
        } else {
            computed = self.diagonal_factors(tau);
            &computed
        };
        let nz = self.zs.len();
        let block_len = self.geometry.rho().n_modes() * nz;
        let kick: Option<Vec<Complex64>> = (impulse != 0.0).then(|| {
            let q = self.params.kappa() * impulse;
            self.zs
                .iter()
                .map(|z| Complex64::from_polar(1.0, -q * z))
                .collect()
        });
        let mut absorbed = 0.0;
        for (i, (block, fblock)) in psi
            .chunks_exact_mut(block_len)
            .zip(factors.chunks_exact(block_len))
            .enumerate()
        {
            let wr = self.wr[i];
            if track_r && wr > 0.0 {
                for (idx, (c, f)) in block.iter().zip(fblock).enumerate() {
                    let share = wr / (wr + self.wz[idx % nz]);
                    absorbed += c.norm_sqr() * (1.0 - f.norm_sqr()) * share;
                }
            }
            match &kick {
                None => block.iter_mut().zip(fblock).for_each(|(c, f)| *c *= f),
                Some(phase) => {
                    for (line, fline) in block.chunks_exact_mut(nz).zip(fblock.chunks_exact(nz)) {
                        for ((c, f), p) in line.iter_mut().zip(fline).zip(phase) {
                            *c *= f * p;
                        }
                    }
                }
            }
        }
        absorbed
    }

    /// `⟨T + V⟩ / ⟨Ψ|Ψ⟩` (absorbers excluded).
    pub fn energy(&self, psi: &WavefunctionH2) -> f64 {
        let mut ws = self.workspace();
        self.energy_with(psi.values.as_slice().expect("standard layout"), &mut ws)
    }

    fn energy_with(&self, psi: &[Complex64], ws: &mut Workspace) -> f64 {
        let total: f64 = psi.iter().map(Complex64::norm_sqr).sum();
        let potential: f64 = psi
            .iter()
            .zip(&self.potential)
            .map(|(c, v)| v * c.norm_sqr())
            .sum();
        let mut buf = psi.to_vec();
        self.to_spectral(&mut buf, ws);
        let nr = self.kr_energy.len();
        let nz = self.zs.len();
        let mut kinetic = 0.0;
        for (line, c) in ws.transposed.chunks_exact(nr).enumerate() {
            let e_mz = self.mode_energy[line / nz] + self.kz_energy[line % nz];
            kinetic += c
                .iter()
                .zip(&self.kr_energy)
                .map(|(c, er)| (e_mz + er) * c.norm_sqr())
                .sum::<f64>();
        }
        kinetic /= (nz * nr) as f64;
        (potential + kinetic) / total
    }

    /// `⟨−i∂_z⟩ / ⟨Ψ|Ψ⟩`.
    pub fn z_momentum(&self, psi: &WavefunctionH2) -> f64 {
        let mut buf = psi.values.as_slice().expect("standard layout").to_vec();
        let mut scratch = self.fft_z.make_scratch();
        self.fft_z.forward(&mut buf, &mut scratch);
        let k = self.geometry.z().wavenumbers();
        let nz = k.len();
        let (mut num, mut den) = (0.0, 0.0);
        for line in buf.chunks_exact(nz) {
            for (c, k) in line.iter().zip(&k) {
                num += k * c.norm_sqr();
                den += c.norm_sqr();
            }
        }
        num / den
    }

    /// Applies `exp(−iκγz)` directly.
    pub fn apply_kick(&self, psi: &mut WavefunctionH2, strength: f64) {
        let slice = psi.values.as_slice_mut().expect("standard layout");
        let q = self.params.kappa() * strength;
        let phase: Vec<Complex64> = self
            .zs
            .iter()
            .map(|z| Complex64::from_polar(1.0, -q * z))
            .collect();
        for line in slice.chunks_exact_mut(self.zs.len()) {
            line.iter_mut().zip(&phase).for_each(|(c, p)| *c *= p);
        }
    }

    fn record(
        &self,
        psi: &WavefunctionH2,
        absorbed_r: f64,
        opts: &PropagateH2Options,
        step: usize,
        ws: &mut Workspace,
        run: &mut H2Run,
    ) -> Result<()> {
        let slice = psi.values.as_slice().expect("standard layout");
        let norm: f64 = slice.iter().map(Complex64::norm_sqr).sum();
        if !norm.is_finite() {
            return Err(Error::Numerical {
                seed: opts.seed,
                step,
                what: format!("norm is {norm} at t = {} a.u.", psi.time),
            });
        }
        let f1 = f1_profile(psi, &self.geometry);
        let mut row = vec![
            norm,
            ionization_probability(&f1, &self.geometry),
            dissociation_probability(&f1, &self.geometry),
            absorbed_r,
        ];
        if opts.record_energy {
            row.push(self.energy_with(slice, ws));
        }
        run.series.push(psi.time, row);
        if opts.keep_f1 {
            run.f1.push(f1);
        }
        Ok(())
    }

    /// Real-time propagation of `psi` (at time 0) under `kicks`.
    pub fn propagate(
        &self,
        psi: &mut WavefunctionH2,
        kicks: &KickSequence,
        opts: &PropagateH2Options,
    ) -> Result<H2Run> {
        let start = Resume {
            step: 0,
            next_kick: 0,
            absorbed_r: 0.0,
            run: H2Run::new(opts),
        };
        self.propagate_from(psi, kicks, opts, start)
    }

    fn propagate_from(
        &self,
        psi: &mut WavefunctionH2,
        kicks: &KickSequence,
        opts: &PropagateH2Options,
        resume: Resume,
    ) -> Result<H2Run> {
        let TimeStep::Real(dt) = self.step else {
            return Err(Error::Usage(
                "real-time propagation needs a real time step".into(),
            ));
        };
        opts.validate(dt)?;
        kicks.validate()?;
        let shape = self.geometry.shape();
        if psi.values.dim() != shape {
            return Err(domain(
                "psi",
                format!(
                    "shape {:?} does not match geometry {shape:?}",
                    psi.values.dim()
                ),
            ));
        }
        let mut ws = self.workspace();
        let Resume {
            mut step,
            next_kick,
            mut absorbed_r,
            mut run,
        } = resume;
        if step == 0 {
            psi.time = 0.0;
            self.record(psi, absorbed_r, opts, 0, &mut ws, &mut run)?;
        }
        let n_steps = opts.n_steps(dt);
        let mut clock = KickedClock::resume(dt, &kicks.kicks, step, next_kick);
        let mut records_done = run.series.len();
        while step < n_steps {
            let chunk = (opts.record_every - step % opts.record_every).min(n_steps - step);
            {
                let mut sys = H2System {
                    prop: self,
                    psi: psi.values.as_slice_mut().expect("standard layout"),
                    ws: &mut ws,
                    absorbed_r: 0.0,
                };
                for _ in 0..chunk {
                    clock.advance(&mut sys);
                }
                clock.flush(&mut sys);
                absorbed_r += sys.absorbed_r;
            }
            step += chunk;
            psi.time = clock.time();
            self.record(psi, absorbed_r, opts, step, &mut ws, &mut run)?;
            records_done += 1;
            if let Some(policy) = &opts.checkpoint {
                if (records_done - 1) % policy.every_records == 0 || step == n_steps {
                    let header = CheckpointHeader {
                        params: self.params,
                        geometry: *self.geometry.spec(),
                        geometry_hash: self.geometry.hash(),
                        dt,
                        time: psi.time,
                        step,
                        next_kick: clock.next_kick(),
                        seed: opts.seed,
                        absorbed_r,
                        records_csv: run.series.to_csv(),
                        ..CheckpointHeader::default()
                    };
                    write_checkpoint(
                        &policy.path,
                        &Checkpoint {
                            header,
                            values: psi.values.clone(),
                        },
                    )?;
                }
            }
        }
        run.absorbed_r = absorbed_r;
        Ok(run)
    }

    /// Imaginary-time relaxation from `guess`; needs an imaginary time step.
    pub fn relax(
        &self,
        guess: WavefunctionH2,
        opts: &H2RelaxOptions,
    ) -> Result<(WavefunctionH2, f64)> {
        let TimeStep::Imaginary(dt) = self.step else {
            return Err(Error::Usage(
                "relaxation needs an imaginary time step".into(),
            ));
        };
        if !(opts.tol > 0.0) {
            return Err(domain("tol", "must be > 0"));
        }
        let mut psi = guess;
        psi.normalize();
        let mut ws = self.workspace();
        let mut energy = self.energy_with(psi.values.as_slice().expect("standard layout"), &mut ws);
        let check = opts.check_every.max(1);
        let mut steps = 0;
        while steps < opts.max_steps {
            {
                let slice = psi.values.as_slice_mut().expect("standard layout");
                let mut sys = H2System {
                    prop: self,
                    psi: slice,
                    ws: &mut ws,
                    absorbed_r: 0.0,
                };
                let mut clock = KickedClock::new(dt, &[]);
                for _ in 0..check {
                    clock.advance(&mut sys);
                    clock.flush(&mut sys);
                    let s = 1.0 / sys.psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
                    sys.psi.iter_mut().for_each(|c| *c *= s);
                }
            }
            steps += check;
            let e = self.energy_with(psi.values.as_slice().expect("standard layout"), &mut ws);
            if !e.is_finite() {
                return Err(Error::Numerical {
                    seed: None,
                    step: steps,
                    what: "energy became non-finite during relaxation".into(),
                });
            }
            let change = (e - energy).abs() / check as f64;
            energy = e;
            if change < opts.tol {
                psi.time = 0.0;
                return Ok((psi, energy));
            }
        }
        Err(Error::Convergence {
            iterations: steps,
            last_energy: energy,
        })
    }
}

/// `out = M · input` for an `n × n` row-major real matrix acting on `n` rows of complex values.
fn mode_transform(matrix: &[f64], n: usize, input: &[Complex64], out: &mut [Complex64]) {
    let width = input.len() / n;
    for (i, out_row) in out.chunks_exact_mut(width).enumerate() {
        out_row.fill(Complex64::default());
        for (k, in_row) in input.chunks_exact(width).enumerate() {
            let a = matrix[i * n + k];
            for (o, x) in out_row.iter_mut().zip(in_row) {
                *o += x * a;
            }
        }
    }
}

struct H2System<'a> {
    prop: &'a H2Propagator,
    psi: &'a mut [Complex64],
    ws: &'a mut Workspace,
    absorbed_r: f64,
}

impl SplitOperator for H2System<'_> {
    fn apply_diagonal(&mut self, potential_time: f64, impulse: f64) {
        let track = matches!(self.prop.step, TimeStep::Real(_));
        self.absorbed_r += self.prop.diagonal(self.psi, potential_time, impulse, track);
    }

    fn apply_kinetic(&mut self, duration: f64) {
        self.prop.kinetic(self.psi, self.ws, duration);
    }
}

struct Resume {
    step: usize,
    next_kick: usize,
    absorbed_r: f64,
    run: H2Run,
}

/// Where and how often to write checkpoints during a propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointPolicy {
    pub path: PathBuf,
    /// Write at every n-th record after the initial one, and at the end.
    pub every_records: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagateH2Options {
    pub dt: f64,
    pub final_time: f64,
    pub record_every: usize,
    /// Attached to numerical-failure diagnostics and checkpoints.
    pub seed: Option<u64>,
    /// Adds an `energy_au` column (one extra full transform per record).
    pub record_energy: bool,
    /// Keeps f₁(R) at every record.
    pub keep_f1: bool,
    pub checkpoint: Option<CheckpointPolicy>,
}

impl PropagateH2Options {
    pub fn new(dt: f64, final_time: f64, record_every: usize) -> Self {
        Self {
            dt,
            final_time,
            record_every,
            seed: None,
            record_energy: false,
            keep_f1: false,
            checkpoint: None,
        }
    }

    pub fn n_steps(&self, dt: f64) -> usize {
        (self.final_time / dt).round() as usize
    }

    fn validate(&self, propagator_dt: f64) -> Result<()> {
        if self.dt != propagator_dt {
            return Err(domain(
                "dt",
                format!("{} differs from the propagator's {propagator_dt}", self.dt),
            ));
        }
        if !(self.final_time >= 0.0 && self.final_time.is_finite()) {
            return Err(domain("final_time", "must be >= 0"));
        }
        if self.record_every == 0 {
            return Err(domain("record_every", "must be >= 1"));
        }
        if let Some(p) = &self.checkpoint {
            if p.every_records == 0 {
                return Err(domain("every_records", "must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<&'static str> {
        let mut c = H2_COLUMNS.to_vec();
        if self.record_energy {
            c.push("energy_au");
        }
        c
    }
}

/// Records of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct H2Run {
    pub series: ObservableSeries,
    /// f₁ at each record when requested.
    pub f1: Vec<Vec<f64>>,
    /// Total norm removed by the R absorber.
    pub absorbed_r: f64,
}

impl H2Run {
    fn new(opts: &PropagateH2Options) -> Self {
        Self {
            series: ObservableSeries::new(opts.columns()),
            f1: Vec::new(),
            absorbed_r: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2RelaxOptions {
    pub dt_imag: f64,
    /// Steps spent relaxing each of three trial guesses whose R centres are
    /// fitted before the main relaxation; 0 starts from [`initial_guess`].
    pub guess_scan_steps: usize,
    /// Converged once the energy changes by less than `tol` per step.
    pub tol: f64,
    pub max_steps: usize,
    pub check_every: usize,
}

impl Default for H2RelaxOptions {
    fn default() -> Self {
        Self {
            dt_imag: 0.05,
            guess_scan_steps: 80,
            tol: 1e-7,
            max_steps: 20_000,
            check_every: 10,
        }
    }
}

/// Relaxes the product guess to the ground state; returns it with `⟨H⟩`.
pub fn relax_h2_ground_state(
    params: H2Params,
    geometry: &H2Geometry,
    opts: &H2RelaxOptions,
) -> Result<(WavefunctionH2, f64)> {
    let prop = H2Propagator::new(params, geometry, TimeStep::Imaginary(opts.dt_imag))?;
    let guess = if opts.guess_scan_steps > 0 {
        scanned_guess(&prop, geometry, opts)?
    } else {
        initial_guess(geometry)
    };
    prop.relax(guess, opts)
}

/// Fits the R centre and width of the product guess.
///
/// Vibrational relaxation in imaginary time runs at the vibrational
/// quantum, roughly fifty times slower than the electronic part, so a guess
/// centred away from the equilibrium distance dominates the cost. Three
/// guesses centred at 2 and 2 ± 0.3 a.u. are relaxed briefly (the electronic
/// part settles), a parabola through their energies gives the harmonic
/// centre and frequency, and a second, narrower round around that centre
/// removes most of the anharmonic bias.
fn scanned_guess(
    prop: &H2Propagator,
    geometry: &H2Geometry,
    opts: &H2RelaxOptions,
) -> Result<WavefunctionH2> {
    let brief = H2RelaxOptions {
        tol: f64::MIN_POSITIVE,
        max_steps: opts.guess_scan_steps,
        check_every: opts.guess_scan_steps,
        ..*opts
    };
    let mut centre = 2.0;
    let mut a = 4.8;
    for h in [0.3, 0.1] {
        let mut energies = [0.0; 3];
        for (e, c) in energies.iter_mut().zip([centre - h, centre, centre + h]) {
            *e = match prop.relax(product_guess(geometry, c, a), &brief) {
                Ok((_, e)) | Err(Error::Convergence { last_energy: e, .. }) => e,
                Err(other) => return Err(other),
            };
        }
        let curvature = (energies[0] + energies[2] - 2.0 * energies[1]) / (2.0 * h * h);
        let slope = (energies[2] - energies[0]) / (2.0 * h);
        if !(curvature > 0.0) {
            break;
        }
        centre = (centre - slope / (2.0 * curvature)).clamp(centre - 2.0 * h, centre + 2.0 * h);
        // harmonic ground state of −(1/M_p)∂²_R + curvature·(R − centre)²
        a = (0.25 * curvature * prop.params().proton_mass)
            .sqrt()
            .clamp(1.0, 20.0);
    }
    Ok(product_guess(geometry, centre, a))
}

/// One realization from `psi0` at t = 0.
pub fn propagate_h2_realization(
    psi0: &WavefunctionH2,
    params: H2Params,
    geometry: &H2Geometry,
    kicks: &KickSequence,
    opts: &PropagateH2Options,
) -> Result<(WavefunctionH2, H2Run)> {
    let prop = H2Propagator::new(params, geometry, TimeStep::Real(opts.dt))?;
    let mut psi = psi0.clone();
    let run = prop.propagate(&mut psi, kicks, opts)?;
    Ok((psi, run))
}

/// Continues a realization from a checkpoint written by [`H2Propagator::propagate`].
///
/// `kicks` must be the same sequence (regenerated from the recorded seed);
/// the returned records include those made before the checkpoint.
pub fn resume_h2_realization(
    prop: &H2Propagator,
    checkpoint: &std::path::Path,
    kicks: &KickSequence,
    opts: &PropagateH2Options,
) -> Result<(WavefunctionH2, H2Run)> {
    let ck = read_checkpoint(checkpoint)?;
    let h = &ck.header;
    if h.geometry_hash != prop.geometry.hash() {
        return Err(Error::Checkpoint("geometry hash does not match".into()));
    }
    if h.params != prop.params {
        return Err(Error::Checkpoint("physical parameters do not match".into()));
    }
    if h.dt != opts.dt {
        return Err(Error::Checkpoint(format!(
            "checkpoint dt {} differs from {}",
            h.dt, opts.dt
        )));
    }
    if h.seed != opts.seed {
        return Err(Error::Checkpoint(
            "seed differs from the checkpointed realization".into(),
        ));
    }
    if h.next_kick > kicks.len() {
        return Err(Error::Checkpoint(
            "kick cursor beyond the kick sequence".into(),
        ));
    }
    let mut series = ObservableSeries::from_csv(&h.records_csv)?;
    if series
        .columns()
        .iter()
        .map(String::as_str)
        .ne(opts.columns())
    {
        return Err(Error::Checkpoint(
            "recorded columns differ from the requested ones".into(),
        ));
    }
    if opts.keep_f1 {
        return Err(Error::Usage(
            "f1 snapshots are not stored in checkpoints".into(),
        ));
    }
    series.truncate_after(h.time);
    let mut psi = WavefunctionH2 {
        values: ck.values,
        time: h.time,
    };
    let resume = Resume {
        step: h.step,
        next_kick: h.next_kick,
        absorbed_r: h.absorbed_r,
        run: H2Run {
            series,
            f1: Vec::new(),
            absorbed_r: h.absorbed_r,
        },
    };
    let run = prop.propagate_from(&mut psi, kicks, opts, resume)?;
    Ok((psi, run))
}

//! Kicked one-dimensional models: a soft-core hydrogen atom and a Morse
//! oscillator for HF, driven by the same shot-noise force.
//!
//! Both Hamiltonians have the form `H = −m_f ∂²_x + V(x) − iW(x) + x F(t)`,
//! propagated on a periodic Fourier grid with the kick-exact Strang scheme of
//! [`crate::propagation`]. For the molecule the force enters as `μ₀ x F_m`
//! with `μ₀ F_m = F_a`, so both systems see the identical perturbation.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::observables::ObservableSeries;
use crate::propagation::{KickedClock, SplitOperator};
use crate::shotnoise::KickSequence;
use crate::spectral::{FourierTransform, TimeStep, UniformGrid};

/// Soft-core Coulomb parameter `a` in `−1/√(x² + a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftCoreParams {
    pub a: f64,
}

impl Default for SoftCoreParams {
    fn default() -> Self {
        Self { a: 2.0 }
    }
}

pub fn softcore_potential(x: f64, params: &SoftCoreParams) -> f64 {
    -1.0 / (x * x + params.a).sqrt()
}

/// Morse oscillator `D(1 − e^{−αx})²` with dipole gradient `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    pub depth: f64,
    pub alpha: f64,
    pub mu0: f64,
    pub reduced_mass: f64,
}

impl MorseParams {
    /// HF reduced mass from standard atomic masses, in electron masses.
    pub const HF_REDUCED_MASS: f64 = 1744.59;

    /// The HF model: D = 0.225, α = 1.1741, μ₀ = 3.54076 (atomic units).
    pub fn hf() -> Self {
        Self {
            depth: 0.225,
            alpha: 1.1741,
            mu0: 3.54076,
            reduced_mass: Self::HF_REDUCED_MASS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("depth", self.depth),
            ("alpha", self.alpha),
            ("mu0", self.mu0),
            ("reduced_mass", self.reduced_mass),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(name, format!("must be > 0, got {v}")));
            }
        }
        if self.lambda() <= 0.5 {
            return Err(domain("depth", "potential supports no bound state"));
        }
        Ok(())
    }

    /// Harmonic frequency `ω = α√(2D/m)`.
    pub fn omega(&self) -> f64 {
        self.alpha * (2.0 * self.depth / self.reduced_mass).sqrt()
    }

    /// `λ = √(2mD)/α = 2D/ω`; bound levels are `n < λ − ½`.
    pub fn lambda(&self) -> f64 {
        (2.0 * self.reduced_mass * self.depth).sqrt() / self.alpha
    }

    pub fn bound_state_count(&self) -> usize {
        (self.lambda() - 0.5).ceil().max(0.0) as usize
    }

    /// Coefficient of `−∂²` in the kinetic operator.
    pub fn mass_factor(&self) -> f64 {
        0.5 / self.reduced_mass
    }
}

pub fn morse_potential(x: f64, params: &MorseParams) -> f64 {
    params.depth * (1.0 - (-params.alpha * x).exp()).powi(2)
}

/// `E_n = ω(n+½) − [ω(n+½)]²/(4D)`, measured from the potential minimum.
pub fn morse_eigenenergy(n: usize, params: &MorseParams) -> Result<f64> {
    params.validate()?;
    if n >= params.bound_state_count() {
        return Err(domain(
            "n",
            format!(
                "level {n} is unbound; {} bound levels",
                params.bound_state_count()
            ),
        ));
    }
    let e = params.omega() * (n as f64 + 0.5);
    Ok(e - e * e / (4.0 * params.depth))
}

/// Analytic Morse ground state `∝ ξ^{λ−½} e^{−ξ/2}`, `ξ = 2λ e^{−αx}`, normalised on `grid`.
pub fn morse_ground_state(grid: &UniformGrid, params: &MorseParams) -> Result<Wavefunction1D> {
    params.validate()?;
    let lambda = params.lambda();
    let log_amp: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| {
            let xi = 2.0 * lambda * (-params.alpha * x).exp();
            (lambda - 0.5) * xi.ln() - 0.5 * xi
        })
        .collect();
    let peak = log_amp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amplitudes = log_amp
        .iter()
        .map(|l| Complex64::new((l - peak).exp(), 0.0))
        .collect();
    let mut psi = Wavefunction1D::new(grid.clone(), amplitudes);
    psi.normalize();
    Ok(psi)
}

/// Quadratic complex absorbing potential on the edges of a 1D box:
/// `W = η((x_on − x)/width)²` on the left strip and its mirror on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Absorber1D {
    pub left_width: f64,
    pub right_width: f64,
    pub strength: f64,
}

impl Absorber1D {
    pub fn none() -> Self {
        Self {
            left_width: 0.0,
            right_width: 0.0,
            strength: 0.0,
        }
    }

    pub fn profile(&self, grid: &UniformGrid) -> Vec<f64> {
        let left_on = grid.min() + self.left_width;
        let right_on = grid.max() - self.right_width;
        grid.points()
            .iter()
            .map(|&x| {
                if self.left_width > 0.0 && x < left_on {
                    self.strength * ((left_on - x) / self.left_width).powi(2)
                } else if self.right_width > 0.0 && x > right_on {
                    self.strength * ((x - right_on) / self.right_width).powi(2)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Complex amplitudes on a uniform grid at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction1D {
    pub grid: UniformGrid,
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl Wavefunction1D {
    pub fn new(grid: UniformGrid, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(grid.len(), amplitudes.len());
        Self {
            grid,
            amplitudes,
            time: 0.0,
        }
    }

    pub fn from_fn(grid: &UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = grid.points().into_iter().map(f).collect();
        Self::new(grid.clone(), amplitudes)
    }

    /// `Σ|ψ|² dx`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>() * self.grid.spacing()
    }

    pub fn normalize(&mut self) {
        let s = 1.0 / self.norm().sqrt();
        self.amplitudes.iter_mut().for_each(|c| *c *= s);
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing()
    }

    /// `|⟨reference|ψ⟩|²` for a normalised reference.
    pub fn survival(&self, reference: &Self) -> f64 {
        reference.overlap(self).norm_sqr()
    }

    /// Mean and variance of x under `|ψ|²/norm`.
    pub fn position_moments(&self) -> (f64, f64) {
        let w: Vec<f64> = self.amplitudes.iter().map(Complex64::norm_sqr).collect();
        let total: f64 = w.iter().sum();
        let xs = self.grid.points();
        let mean = xs.iter().zip(&w).map(|(x, p)| x * p).sum::<f64>() / total;
        let var = xs
            .iter()
            .zip(&w)
            .map(|(x, p)| (x - mean).powi(2) * p)
            .sum::<f64>()
            / total;
        (mean, var)
    }

    /// `⟨−i∂_x⟩ / norm`.
    pub fn momentum_expectation(&self) -> f64 {
        let ft = FourierTransform::new(self.grid.len());
        let mut buf = self.amplitudes.clone();
        ft.forward(&mut buf, &mut ft.make_scratch());
        let k = self.grid.wavenumbers();
        let total: f64 = buf.iter().map(Complex64::norm_sqr).sum();
        buf.iter()
            .zip(&k)
            .map(|(c, k)| k * c.norm_sqr())
            .sum::<f64>()
            / total
    }
}

/// `−m_f ∂² + V − iW` on a periodic grid.
#[derive(Debug, Clone)]
pub struct Hamiltonian1D {
    pub grid: UniformGrid,
    pub mass_factor: f64,
    pub potential: Vec<f64>,
    pub absorber: Vec<f64>,
}

impl Hamiltonian1D {
    pub fn new(
        grid: UniformGrid,
        mass_factor: f64,
        potential: impl Fn(f64) -> f64,
        absorber: &Absorber1D,
    ) -> Self {
        let v = grid.points().into_iter().map(potential).collect();
        let w = absorber.profile(&grid);
        Self {
            grid,
            mass_factor,
            potential: v,
            absorber: w,
        }
    }

    pub fn without_absorber(&self) -> Self {
        Self {
            absorber: vec![0.0; self.grid.len()],
            ..self.clone()
        }
    }

    /// `⟨ψ|T + V|ψ⟩ / ⟨ψ|ψ⟩` (the Hermitian part).
    pub fn energy(&self, psi: &Wavefunction1D) -> f64 {
        let ft = FourierTransform::new(self.grid.len());
        let mut buf = psi.amplitudes.clone();
        let total: f64 = buf.iter().map(Complex64::norm_sqr).sum();
        let potential: f64 = buf
            .iter()
            .zip(&self.potential)
            .map(|(c, v)| v * c.norm_sqr())
            .sum();
        ft.forward(&mut buf, &mut ft.make_scratch());
        let kinetic: f64 = buf
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(c, k)| self.mass_factor * k * k * c.norm_sqr())
            .sum::<f64>()
            / self.grid.len() as f64;
        (potential + kinetic) / total
    }

    /// Gaussian centred on the potential minimum with the harmonic width of the local curvature.
    fn harmonic_guess(&self) -> Wavefunction1D {
        let v = &self.potential;
        let (i0, _) = v
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty grid");
        let h = self.grid.spacing();
        let curvature = if i0 > 0 && i0 + 1 < v.len() {
            (v[i0 + 1] - 2.0 * v[i0] + v[i0 - 1]) / (h * h)
        } else {
            0.0
        };
        let width2 = if curvature > 0.0 {
            (2.0 * self.mass_factor / curvature).sqrt()
        } else {
            1.0
        };
        let x0 = self.grid.point(i0);
        let mut psi = Wavefunction1D::from_fn(&self.grid, |x| {
            Complex64::new((-(x - x0).powi(2) / (2.0 * width2)).exp(), 0.0)
        });
        psi.normalize();
        psi
    }
}

/// Stepping state for one wavefunction under a [`Hamiltonian1D`].
struct Split1D<'a> {
    ham: &'a Hamiltonian1D,
    psi: &'a mut [Complex64],
    step: TimeStep,
    coupling: f64,
    ft: FourierTransform,
    scratch: Vec<Complex64>,
    points: Vec<f64>,
    wavenumbers: Vec<f64>,
    full_potential: Vec<Complex64>,
    full_kinetic: Vec<Complex64>,
}

impl<'a> Split1D<'a> {
    fn new(
        ham: &'a Hamiltonian1D,
        psi: &'a mut [Complex64],
        step: TimeStep,
        coupling: f64,
    ) -> Self {
        let ft = FourierTransform::new(ham.grid.len());
        let scratch = ft.make_scratch();
        let mut s = Self {
            ham,
            psi,
            step,
            coupling,
            ft,
            scratch,
            points: ham.grid.points(),
            wavenumbers: ham.grid.wavenumbers(),
            full_potential: Vec::new(),
            full_kinetic: Vec::new(),
        };
        s.full_potential = s.potential_factors(step.duration());
        s.full_kinetic = s.kinetic_factors(step.duration());
        s
    }

    fn potential_factors(&self, tau: f64) -> Vec<Complex64> {
        let st = self.step.scaled(tau / self.step.duration());
        self.ham
            .potential
            .iter()
            .zip(&self.ham.absorber)
            .map(|(&v, &w)| st.factor(v, w))
            .collect()
    }

    fn kinetic_factors(&self, d: f64) -> Vec<Complex64> {
        let st = self.step.scaled(d / self.step.duration());
        self.wavenumbers
            .iter()
            .map(|k| st.factor(self.ham.mass_factor * k * k, 0.0))
            .collect()
    }
}

impl SplitOperator for Split1D<'_> {
    fn apply_diagonal(&mut self, tau: f64, impulse: f64) {
        let computed;
        let factors = if tau == self.step.duration() {
            &self.full_potential
        } else {
            computed = self.potential_factors(tau);
            &computed
        };
        if impulse == 0.0 {
            self.psi.iter_mut().zip(factors).for_each(|(c, f)| *c *= f);
        } else {
            let q = self.coupling * impulse;
            for ((c, f), x) in self.psi.iter_mut().zip(factors).zip(&self.points) {
                *c *= f * Complex64::from_polar(1.0, -q * x);
            }
        }
    }

    fn apply_kinetic(&mut self, d: f64) {
        let computed;
        let factors = if d == self.step.duration() {
            &self.full_kinetic
        } else {
            computed = self.kinetic_factors(d);
            &computed
        };
        self.ft.apply_diagonal(self.psi, factors, &mut self.scratch);
    }
}

/// Imaginary-time relaxation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOptions {
    pub dt_imag: f64,
    /// Converged once the energy changes by less than `tol` per step.
    pub tol: f64,
    pub max_steps: usize,
    /// Steps between energy evaluations.
    pub check_every: usize,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            dt_imag: 0.05,
            tol: 1e-11,
            max_steps: 200_000,
            check_every: 20,
        }
    }
}

/// Imaginary-time split-operator relaxation with renormalisation after every step.
///
/// The absorber is ignored. Returns the normalised state and `⟨H⟩`.
pub fn relax_ground_state(
    ham: &Hamiltonian1D,
    opts: &RelaxOptions,
) -> Result<(Wavefunction1D, f64)> {
    relax_from(ham, ham.harmonic_guess(), opts)
}

/// As [`relax_ground_state`] starting from a caller-supplied guess.
pub fn relax_from(
    ham: &Hamiltonian1D,
    guess: Wavefunction1D,
    opts: &RelaxOptions,
) -> Result<(Wavefunction1D, f64)> {
    if !(opts.tol > 0.0) {
        return Err(domain("tol", "must be > 0"));
    }
    if !(opts.dt_imag > 0.0) {
        return Err(domain("dt_imag", "must be > 0"));
    }
    let bare = ham.without_absorber();
    let mut psi = guess;
    let mut energy = bare.energy(&psi);
    let check = opts.check_every.max(1);
    let mut steps = 0;
    while steps < opts.max_steps {
        {
            let mut sys = Split1D::new(
                &bare,
                &mut psi.amplitudes,
                TimeStep::Imaginary(opts.dt_imag),
                0.0,
            );
            let mut clock = KickedClock::new(opts.dt_imag, &[]);
            for _ in 0..check {
                clock.advance(&mut sys);
                clock.flush(&mut sys);
                let s = 1.0 / (sys.psi.iter().map(Complex64::norm_sqr).sum::<f64>()).sqrt();
                sys.psi.iter_mut().for_each(|c| *c *= s);
            }
        }
        psi.normalize();
        steps += check;
        let e = bare.energy(&psi);
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
            return Ok((psi, energy));
        }
    }
    Err(Error::Convergence {
        iterations: steps,
        last_energy: energy,
    })
}

/// Delta kick: `ψ(x) ← exp(−i·coupling·strength·x) ψ(x)`.
pub fn apply_kick(psi: &mut Wavefunction1D, strength: f64, coupling: f64) {
    if strength == 0.0 {
        return;
    }
    let q = coupling * strength;
    let xs = psi.grid.points();
    for (c, x) in psi.amplitudes.iter_mut().zip(xs) {
        *c *= Complex64::from_polar(1.0, -q * x);
    }
}

/// Real-time propagation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateOptions {
    pub dt: f64,
    pub final_time: f64,
    /// Steps between records; the final step is always recorded.
    pub record_every: usize,
    /// Attached to numerical-failure diagnostics.
    pub seed: Option<u64>,
}

impl PropagateOptions {
    pub fn n_steps(&self) -> usize {
        (self.final_time / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(domain("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.final_time >= 0.0) {
            return Err(domain("final_time", "must be >= 0"));
        }
        if self.record_every == 0 {
            return Err(domain("record_every", "must be >= 1"));
        }
        Ok(())
    }
}

pub const COLUMNS_1D: [&str; 3] = ["norm", "survival", "energy_au"];

/// Propagates `psi` under `ham` and the kick train, recording norm, survival
/// against `reference` and energy.
///
/// Kick strengths are multiplied by `coupling` in the phase `exp(−i·coupling·γ·x)`.
pub fn propagate_kicked(
    psi: &mut Wavefunction1D,
    ham: &Hamiltonian1D,
    kicks: &KickSequence,
    coupling: f64,
    reference: &Wavefunction1D,
    opts: &PropagateOptions,
) -> Result<ObservableSeries> {
    opts.validate()?;
    kicks.validate()?;
    let mut series = ObservableSeries::new(COLUMNS_1D);
    let record = |psi: &Wavefunction1D, series: &mut ObservableSeries, step: usize| -> Result<()> {
        let norm = psi.norm();
        if !norm.is_finite() {
            return Err(Error::Numerical {
                seed: opts.seed,
                step,
                what: format!("norm is {norm} at t = {}", psi.time),
            });
        }
        series.push(
            psi.time,
            vec![norm, psi.survival(reference), ham.energy(psi)],
        );
        Ok(())
    };
    record(psi, &mut series, 0)?;
    let n_steps = opts.n_steps();
    let start = psi.time;
    let mut sys_psi = std::mem::take(&mut psi.amplitudes);
    let mut clock = KickedClock::new(opts.dt, &kicks.kicks);
    // skip kicks at or before the starting time
    while clock.next_kick() < kicks.len() && kicks.kicks[clock.next_kick()].time <= start {
        clock = KickedClock::resume(opts.dt, &kicks.kicks, 0, clock.next_kick() + 1);
    }
    let mut step = 0;
    while step < n_steps {
        let chunk = opts.record_every.min(n_steps - step);
        {
            let mut sys = Split1D::new(ham, &mut sys_psi, TimeStep::Real(opts.dt), coupling);
            for _ in 0..chunk {
                clock.advance(&mut sys);
            }
            clock.flush(&mut sys);
        }
        step += chunk;
        psi.amplitudes = std::mem::take(&mut sys_psi);
        psi.time = start + clock.time();
        record(psi, &mut series, step)?;
        sys_psi = std::mem::take(&mut psi.amplitudes);
    }
    psi.amplitudes = sys_psi;
    Ok(series)
}

/// Which of the two 1D systems a [`Model1D`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Atom,
    Morse,
}

/// A 1D system ready for kicked propagation: Hamiltonian, ground state and
/// force coupling.
#[derive(Debug, Clone)]
pub struct Model1D {
    pub kind: ModelKind,
    pub hamiltonian: Hamiltonian1D,
    pub ground_state: Wavefunction1D,
    pub ground_energy: f64,
    /// Multiplies the kick strength in the phase.
    pub coupling: f64,
    /// Converts the common force `F_a` into this model's force.
    pub force_scale: f64,
}

/// Atom default box: x ∈ [−200, 200], 2048 points.
pub fn default_atom_grid() -> UniformGrid {
    UniformGrid::new(2048, -200.0, 200.0).expect("static grid")
}

/// Morse default box: x ∈ [−2, 12], 1024 points.
pub fn default_morse_grid() -> UniformGrid {
    UniformGrid::new(1024, -2.0, 12.0).expect("static grid")
}

/// Absorbers on the outer 15% of the box at each open side.
pub fn default_atom_absorber(grid: &UniformGrid) -> Absorber1D {
    let w = 0.15 * (grid.max() - grid.min());
    Absorber1D {
        left_width: w,
        right_width: w,
        strength: 0.1,
    }
}

/// The Morse box is closed on the left by the repulsive wall.
pub fn default_morse_absorber(grid: &UniformGrid) -> Absorber1D {
    Absorber1D {
        left_width: 0.0,
        right_width: 0.15 * (grid.max() - grid.min()),
        strength: 0.05,
    }
}

impl Model1D {
    /// Soft-core atom; the ground state is obtained by relaxation.
    pub fn atom(
        params: SoftCoreParams,
        grid: UniformGrid,
        absorber: Absorber1D,
        relax: &RelaxOptions,
    ) -> Result<Self> {
        if !(params.a > 0.0) {
            return Err(domain("a", "must be > 0"));
        }
        let hamiltonian =
            Hamiltonian1D::new(grid, 0.5, |x| softcore_potential(x, &params), &absorber);
        let (ground_state, ground_energy) = relax_ground_state(&hamiltonian, relax)?;
        Ok(Self {
            kind: ModelKind::Atom,
            hamiltonian,
            ground_state,
            ground_energy,
            coupling: 1.0,
            force_scale: 1.0,
        })
    }

    /// Morse oscillator with the analytic ground state and matched forcing
    /// `F_m = F_a / μ₀`.
    pub fn morse(params: MorseParams, grid: UniformGrid, absorber: Absorber1D) -> Result<Self> {
        params.validate()?;
        let hamiltonian = Hamiltonian1D::new(
            grid.clone(),
            params.mass_factor(),
            |x| morse_potential(x, &params),
            &absorber,
        );
        let ground_state = morse_ground_state(&grid, &params)?;
        let ground_energy = hamiltonian.energy(&ground_state);
        Ok(Self {
            kind: ModelKind::Morse,
            hamiltonian,
            ground_state,
            ground_energy,
            coupling: params.mu0,
            force_scale: 1.0 / params.mu0,
        })
    }

    /// Propagates the ground state under the common force `kicks` (as `F_a`).
    pub fn run(&self, kicks: &KickSequence, opts: &PropagateOptions) -> Result<ObservableSeries> {
        let mut psi = self.ground_state.clone();
        let own = kicks.scaled(self.force_scale);
        propagate_kicked(
            &mut psi,
            &self.hamiltonian,
            &own,
            self.coupling,
            &self.ground_state,
            opts,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shotnoise::Kick;

    #[test]
    fn softcore_values() {
        let p = SoftCoreParams::default();
        assert!((softcore_potential(0.0, &p) + 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(softcore_potential(3.3, &p), softcore_potential(-3.3, &p));
        let far = softcore_potential(1e8, &p);
        assert!(far < 0.0 && far > -1e-7);
    }

    #[test]
    fn morse_values() {
        let p = MorseParams::hf();
        assert_eq!(morse_potential(0.0, &p), 0.0);
        assert!((morse_potential(60.0, &p) - 0.225).abs() < 1e-12);
        let at_range = morse_potential(1.0 / p.alpha, &p);
        assert!((at_range - 0.225 * (1.0 - (-1f64).exp()).powi(2)).abs() < 1e-15);
        assert!((at_range - 0.0899).abs() < 1e-4);
    }

    #[test]
    fn morse_levels() {
        let p = MorseParams::hf();
        // ω = 0.018856655..., E0 = ω/2 − ω²/(16D)
        let e0 = morse_eigenenergy(0, &p).unwrap();
        assert!((e0 - 9.329_557_105_581_586e-3).abs() < 1e-12);
        let e: Vec<f64> = (0..p.bound_state_count())
            .map(|n| morse_eigenenergy(n, &p).unwrap())
            .collect();
        let spacings: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(spacings.windows(2).all(|w| w[1] < w[0]));
        let n_star = 2.0 * p.depth / p.omega() - 0.5;
        assert_eq!(p.bound_state_count(), 24);
        assert!((n_star - 23.36).abs() < 0.01);
        assert!(e.iter().all(|&x| x < p.depth));
        assert!(matches!(
            morse_eigenenergy(24, &p),
            Err(Error::Domain { name: "n", .. })
        ));
    }

    #[test]
    fn harmonic_oscillator_relaxes_to_one_half() {
        let grid = UniformGrid::new(256, -12.0, 12.0).unwrap();
        let ham = Hamiltonian1D::new(grid, 0.5, |x| 0.5 * x * x, &Absorber1D::none());
        let opts = RelaxOptions {
            dt_imag: 0.01,
            tol: 1e-12,
            ..RelaxOptions::default()
        };
        let (psi, e) = relax_ground_state(&ham, &opts).unwrap();
        assert!((e - 0.5).abs() < 1e-6, "E0 = {e}");
        assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn relaxation_reports_non_convergence() {
        let grid = UniformGrid::new(64, -8.0, 8.0).unwrap();
        let ham = Hamiltonian1D::new(
            grid,
            0.5,
            |x| 0.5 * x * x + 0.1 * x.powi(3).sin(),
            &Absorber1D::none(),
        );
        let opts = RelaxOptions {
            max_steps: 2,
            check_every: 1,
            ..RelaxOptions::default()
        };
        assert!(matches!(
            relax_ground_state(&ham, &opts),
            Err(Error::Convergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn kick_is_a_pure_phase_shifting_momentum() {
        let grid = UniformGrid::new(512, -30.0, 30.0).unwrap();
        let mut psi = Wavefunction1D::from_fn(&grid, |x| {
            Complex64::from_polar((-(x * x) / 4.0).exp(), 0.3 * x)
        });
        psi.normalize();
        let before = psi.clone();
        apply_kick(&mut psi, 0.0, 1.0);
        assert_eq!(psi, before);
        let p0 = psi.momentum_expectation();
        apply_kick(&mut psi, 0.7, 2.0);
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        assert!((psi.momentum_expectation() - (p0 - 1.4)).abs() < 1e-10);
    }

    #[test]
    fn stationary_state_survives_without_kicks() {
        let grid = UniformGrid::new(256, -12.0, 12.0).unwrap();
        let ham = Hamiltonian1D::new(grid, 0.5, |x| 0.5 * x * x, &Absorber1D::none());
        let opts = RelaxOptions {
            dt_imag: 0.01,
            tol: 1e-14,
            ..RelaxOptions::default()
        };
        let (ground, _) = relax_ground_state(&ham, &opts).unwrap();
        let mut psi = ground.clone();
        let series = propagate_kicked(
            &mut psi,
            &ham,
            &KickSequence::empty(20.0),
            1.0,
            &ground,
            &PropagateOptions {
                dt: 0.01,
                final_time: 20.0,
                record_every: 200,
                seed: None,
            },
        )
        .unwrap();
        assert_eq!(series.len(), 11);
        assert_eq!(series.times()[10], 20.0);
        for s in series.column("survival") {
            assert!((s - 1.0).abs() < 1e-8, "survival {s}");
        }
    }

    #[test]
    fn kicks_preserve_norm_without_absorber() {
        let grid = UniformGrid::new(512, -40.0, 40.0).unwrap();
        let p = SoftCoreParams::default();
        let ham = Hamiltonian1D::new(
            grid,
            0.5,
            |x| softcore_potential(x, &p),
            &Absorber1D::none(),
        );
        let (ground, _) = relax_ground_state(&ham, &RelaxOptions::default()).unwrap();
        let kicks = KickSequence {
            kicks: (1..20)
                .map(|i| Kick {
                    time: 0.37 * i as f64,
                    strength: 0.2,
                })
                .collect(),
            horizon: 10.0,
        };
        let mut psi = ground.clone();
        let series = propagate_kicked(
            &mut psi,
            &ham,
            &kicks,
            1.0,
            &ground,
            &PropagateOptions {
                dt: 0.05,
                final_time: 10.0,
                record_every: 10,
                seed: None,
            },
        )
        .unwrap();
        for n in series.column("norm") {
            assert!((n - 1.0).abs() < 1e-10);
        }
        let surv = series.column("survival");
        assert!(surv.iter().all(|&s| (0.0..=1.0 + 1e-12).contains(&s)));
        assert!((surv[0] - 1.0).abs() < 1e-12);
        assert!(*surv.last().unwrap() < 0.99);
    }
}

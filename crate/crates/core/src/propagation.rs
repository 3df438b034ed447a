//! Step scheduling for kicked split-operator propagation.
//!
//! Each step `[n·dt, (n+1)·dt]` is cut at every kick time inside it, and each
//! piece of length `d` is the Strang sequence `V(d/2) T(d) V(d/2)`. Kicks and
//! the potential are both diagonal on the grid, so adjacent potential half
//! steps and kick phases are accumulated and applied as one multiplication
//! just before the next kinetic step, or when the caller needs the state.

use crate::shotnoise::Kick;

/// The two halves of a split-operator system.
pub trait SplitOperator {
    /// Multiplies by `exp(−i V τ)` and the kick phase of the accumulated impulse.
    fn apply_diagonal(&mut self, potential_time: f64, impulse: f64);

    /// Multiplies by `exp(−i T d)` in the spectral representation.
    fn apply_kinetic(&mut self, duration: f64);
}

/// Tracks time, the next pending kick and the not-yet-applied diagonal phases.
#[derive(Debug, Clone)]
pub struct KickedClock<'a> {
    dt: f64,
    kicks: &'a [Kick],
    next_kick: usize,
    step: usize,
    pending_potential: f64,
    pending_impulse: f64,
}

impl<'a> KickedClock<'a> {
    pub fn new(dt: f64, kicks: &'a [Kick]) -> Self {
        Self::resume(dt, kicks, 0, 0)
    }

    /// Continues from a flushed state at `step` with `next_kick` kicks already applied.
    pub fn resume(dt: f64, kicks: &'a [Kick], step: usize, next_kick: usize) -> Self {
        Self {
            dt,
            kicks,
            next_kick,
            step,
            pending_potential: 0.0,
            pending_impulse: 0.0,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn next_kick(&self) -> usize {
        self.next_kick
    }

    /// Time of the current step boundary, `step·dt`.
    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    /// Advances by one step of length `dt`, applying every kick with time in `(t, t+dt]`.
    pub fn advance<S: SplitOperator>(&mut self, system: &mut S) {
        let t0 = self.time();
        let t1 = (self.step + 1) as f64 * self.dt;
        let mut current = t0;
        while let Some(kick) = self.kicks.get(self.next_kick) {
            if kick.time > t1 {
                break;
            }
            if kick.time > current {
                self.substep(system, kick.time - current);
                current = kick.time;
            }
            self.pending_impulse += kick.strength;
            self.next_kick += 1;
        }
        if t1 > current {
            self.substep(system, t1 - current);
        }
        self.step += 1;
    }

    fn substep<S: SplitOperator>(&mut self, system: &mut S, d: f64) {
        self.pending_potential += 0.5 * d;
        self.flush(system);
        system.apply_kinetic(d);
        self.pending_potential += 0.5 * d;
    }

    /// Applies any accumulated diagonal phases so the system holds the state at [`Self::time`].
    pub fn flush<S: SplitOperator>(&mut self, system: &mut S) {
        if self.pending_potential != 0.0 || self.pending_impulse != 0.0 {
            system.apply_diagonal(self.pending_potential, self.pending_impulse);
            self.pending_potential = 0.0;
            self.pending_impulse = 0.0;
        }
    }
}

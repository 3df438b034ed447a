//! Averages over independent noise realizations.
//!
//! Realization `j` of an ensemble with master seed `s` always receives the
//! seed [`derive_seed`]`(s, j)`, runs on whichever worker is free, and is
//! merged by index, so results do not depend on the worker count.

use std::fmt::Write as _;
use std::sync::Mutex;

use crate::error::{Error, FailedRealization, Result};
use crate::observables::ObservableSeries;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser of `master + (index + 1)·γ`; a bijection in `index` for a fixed master.
pub fn derive_seed(master: u64, index: usize) -> u64 {
    let mut z = master.wrapping_add((index as u64).wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub n_realizations: usize,
    pub master_seed: u64,
    /// Worker threads; affects only wall time.
    pub workers: usize,
    /// Keep every realization's series in the result.
    pub keep_realizations: bool,
}

impl EnsembleSpec {
    pub fn new(n_realizations: usize, master_seed: u64) -> Self {
        Self {
            n_realizations,
            master_seed,
            workers: 1,
            keep_realizations: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_realizations == 0 {
            return Err(crate::error::domain("n_realizations", "must be >= 1"));
        }
        if self.workers == 0 {
            return Err(crate::error::domain("workers", "must be >= 1"));
        }
        Ok(())
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.n_realizations)
            .map(|j| derive_seed(self.master_seed, j))
            .collect()
    }
}

/// One realization as a function of its index and seed.
pub trait RealizationSolver: Sync {
    fn run(&self, index: usize, seed: u64) -> Result<ObservableSeries>;
}

impl<F> RealizationSolver for F
where
    F: Fn(usize, u64) -> Result<ObservableSeries> + Sync,
{
    fn run(&self, index: usize, seed: u64) -> Result<ObservableSeries> {
        self(index, seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub mean: ObservableSeries,
    /// Sample standard deviation over √N at each record; zero when N = 1.
    pub std_error: ObservableSeries,
    pub seeds: Vec<u64>,
    pub master_seed: u64,
    pub realizations: Option<Vec<ObservableSeries>>,
}

impl EnsembleResult {
    pub fn n_realizations(&self) -> usize {
        self.seeds.len()
    }

    /// `index seed` per line, preceded by a comment with the master seed.
    pub fn seed_manifest(&self) -> String {
        let mut out = format!("# master_seed {}\n# index seed\n", self.master_seed);
        for (j, s) in self.seeds.iter().enumerate() {
            writeln!(out, "{j} {s}").expect("write to String");
        }
        out
    }

    /// Mean and standard error columns interleaved: `name`, `name_stderr`.
    pub fn to_csv(&self) -> String {
        let mut columns = Vec::new();
        for c in self.mean.columns() {
            columns.push(c.clone());
            columns.push(format!("{c}_stderr"));
        }
        let mut table = ObservableSeries::new(columns);
        for ((t, m), s) in self
            .mean
            .times()
            .iter()
            .zip(self.mean.rows())
            .zip(self.std_error.rows())
        {
            table.push(*t, m.iter().zip(s).flat_map(|(a, b)| [*a, *b]).collect());
        }
        table.to_csv()
    }
}

/// Runs every realization of `spec` and averages the series.
pub fn run_ensemble<S: RealizationSolver + ?Sized>(
    spec: &EnsembleSpec,
    solver: &S,
) -> Result<EnsembleResult> {
    spec.validate()?;
    let seeds = spec.seeds();
    let slots: Vec<Mutex<Option<Result<ObservableSeries>>>> =
        (0..seeds.len()).map(|_| Mutex::new(None)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    pool.scope(|scope| {
        for (j, &seed) in seeds.iter().enumerate() {
            let slot = &slots[j];
            scope.spawn(move |_| {
                let outcome = solver.run(j, seed);
                *slot.lock().expect("slot lock") = Some(outcome);
            });
        }
    });

    let mut series = Vec::with_capacity(seeds.len());
    let mut failed = Vec::new();
    for (j, slot) in slots.into_iter().enumerate() {
        match slot
            .into_inner()
            .expect("slot lock")
            .expect("every task ran")
        {
            Ok(s) => series.push(s),
            Err(e) => failed.push(FailedRealization {
                index: j,
                seed: seeds[j],
                message: e.to_string(),
            }),
        }
    }
    if !failed.is_empty() {
        return Err(Error::PartialEnsemble {
            total: seeds.len(),
            failed,
        });
    }
    let (mean, std_error) = average(&series)?;
    Ok(EnsembleResult {
        mean,
        std_error,
        seeds,
        master_seed: spec.master_seed,
        realizations: spec.keep_realizations.then_some(series),
    })
}

/// Record-wise mean and standard error of series sharing one layout.
pub fn average(series: &[ObservableSeries]) -> Result<(ObservableSeries, ObservableSeries)> {
    let first = series
        .first()
        .ok_or_else(|| Error::Usage("nothing to average".into()))?;
    if let Some(j) = series.iter().position(|s| !s.same_layout(first)) {
        return Err(Error::Usage(format!(
            "realization {j} has different columns or record times than realization 0"
        )));
    }
    let n = series.len() as f64;
    let mut mean = ObservableSeries::new(first.columns().iter().cloned());
    let mut err = ObservableSeries::new(first.columns().iter().cloned());
    for (r, &t) in first.times().iter().enumerate() {
        let width = first.columns().len();
        let mut m = vec![0.0; width];
        for s in series {
            for (acc, v) in m.iter_mut().zip(&s.rows()[r]) {
                *acc += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= n);
        let mut e = vec![0.0; width];
        if series.len() > 1 {
            for s in series {
                for ((acc, v), mu) in e.iter_mut().zip(&s.rows()[r]).zip(&m) {
                    *acc += (v - mu).powi(2);
                }
            }
            e.iter_mut()
                .for_each(|v| *v = (*v / (n - 1.0)).sqrt() / n.sqrt());
        }
        mean.push(t, m);
        err.push(t, e);
    }
    Ok((mean, err))
}

/// Largest standard error per observable and the records exceeding its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub passed: bool,
    /// `(column, max standard error, threshold)`.
    pub max_std_error: Vec<(String, f64, f64)>,
    /// `(column, time)` of every record above threshold.
    pub violations: Vec<(String, f64)>,
}

/// Checks each listed column's standard error against its threshold.
pub fn convergence_report(
    result: &EnsembleResult,
    thresholds: &[(&str, f64)],
) -> Result<ConvergenceReport> {
    if result.n_realizations() < 2 {
        return Err(Error::Usage(
            "a convergence report needs at least 2 realizations".into(),
        ));
    }
    let mut max_std_error = Vec::new();
    let mut violations = Vec::new();
    for &(name, threshold) in thresholds {
        if result.std_error.column_index(name).is_none() {
            return Err(Error::Usage(format!("no observable named `{name}`")));
        }
        let errs = result.std_error.column(name);
        let max = errs.iter().cloned().fold(0.0, f64::max);
        for (t, e) in result.std_error.times().iter().zip(&errs) {
            // a zero threshold admits only exactly-zero error
            if *e > threshold || (threshold == 0.0 && *e != 0.0) {
                violations.push((name.to_string(), *t));
            }
        }
        max_std_error.push((name.to_string(), max, threshold));
    }
    Ok(ConvergenceReport {
        passed: violations.is_empty(),
        max_std_error,
        violations,
    })
}

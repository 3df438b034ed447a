//! White shot noise: trains of positive delta impulses at Poisson times.
//!
//! A realization of the force is
//!
//! ```text
//! F(t) = Σ_i γ_i δ(t − t_i)
//! ```
//!
//! with exponentially distributed gaps `t_i − t_{i−1}` (mean `⟨Δt⟩ = 1/λ`) and
//! exponentially distributed strengths `γ_i` (mean `γ`), mutually independent.
//! Its first two moments are `⟨F⟩ = γλ` and
//! `⟨F(t)F(s)⟩ = 2γ²λ δ(t−s) + γ²λ²`.
//!
//! Random numbers come from ChaCha20 seeded through `SeedableRng::seed_from_u64`,
//! which is fully specified and platform independent. Exponential variates use
//! the inverse CDF `−μ ln u` on an open-interval uniform `u ∈ (0, 1)`; each kick
//! consumes exactly one gap draw followed by one strength draw.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};

/// Parameters of one noise realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Mean kick strength γ (a.u. impulse).
    pub gamma_mean: f64,
    /// Mean kick interval ⟨Δt⟩ = 1/λ (a.u. time).
    pub dt_mean: f64,
    /// Duration of the realization (a.u. time).
    pub horizon: f64,
    pub seed: u64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_mean > 0.0 && self.gamma_mean.is_finite()) {
            return Err(domain(
                "gamma_mean",
                format!("must be > 0, got {}", self.gamma_mean),
            ));
        }
        if !(self.dt_mean > 0.0 && self.dt_mean.is_finite()) {
            return Err(domain(
                "dt_mean",
                format!("must be > 0, got {}", self.dt_mean),
            ));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(domain(
                "horizon",
                format!("must be >= 0, got {}", self.horizon),
            ));
        }
        Ok(())
    }

    /// Kick rate λ.
    pub fn rate(&self) -> f64 {
        1.0 / self.dt_mean
    }

    /// Analytic mean force γλ.
    pub fn mean_force(&self) -> f64 {
        self.gamma_mean * self.rate()
    }

    /// Analytic constant background γ²λ² of the autocovariance.
    pub fn covariance_background(&self) -> f64 {
        self.mean_force().powi(2)
    }

    /// Analytic weight 2γ²λ of the delta term of the autocovariance.
    pub fn covariance_delta_weight(&self) -> f64 {
        2.0 * self.gamma_mean.powi(2) * self.rate()
    }

    /// Analytic white level 4γ²λ/√(2π) of the one-sided power spectrum.
    pub fn spectral_white_level(&self) -> f64 {
        4.0 * self.gamma_mean.powi(2) * self.rate() / (2.0 * PI).sqrt()
    }
}

/// A single delta impulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kick {
    pub time: f64,
    pub strength: f64,
}

/// One realization of the force: kicks ordered by strictly increasing time in `(0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KickSequence {
    pub kicks: Vec<Kick>,
    pub horizon: f64,
}

impl KickSequence {
    pub fn empty(horizon: f64) -> Self {
        Self {
            kicks: Vec::new(),
            horizon,
        }
    }

    pub fn len(&self) -> usize {
        self.kicks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kicks.is_empty()
    }

    pub fn total_impulse(&self) -> f64 {
        self.kicks.iter().map(|k| k.strength).sum()
    }

    /// Returns the same kicks with every strength multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kicks: self
                .kicks
                .iter()
                .map(|k| Kick {
                    time: k.time,
                    strength: k.strength * factor,
                })
                .collect(),
            horizon: self.horizon,
        }
    }

    /// Checks ordering, positivity and the `(0, horizon]` window.
    pub fn validate(&self) -> Result<()> {
        let mut last = 0.0;
        for (i, k) in self.kicks.iter().enumerate() {
            if !(k.time > last) || k.time > self.horizon {
                return Err(Error::Usage(format!(
                    "kick {i} at t={} breaks ordering or lies outside (0, {}]",
                    k.time, self.horizon
                )));
            }
            if !(k.strength > 0.0 && k.strength.is_finite()) {
                return Err(Error::Usage(format!(
                    "kick {i} has non-positive strength {}",
                    k.strength
                )));
            }
            last = k.time;
        }
        Ok(())
    }

    /// Writes `# horizon_au = ...` followed by one `time strength` line per kick
    /// with 17 significant digits.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# horizon_au = {:.16e}", self.horizon)?;
        writeln!(out, "# time_au strength_au")?;
        for k in &self.kicks {
            writeln!(out, "{:.16e} {:.16e}", k.time, k.strength)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parses the format written by [`KickSequence::write_text`].
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut horizon = None;
        let mut kicks = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.trim().strip_prefix("horizon_au =") {
                    horizon = Some(parse_f64(value.trim(), lineno)?);
                }
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(t), Some(g), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Usage(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            };
            kicks.push(Kick {
                time: parse_f64(t, lineno)?,
                strength: parse_f64(g, lineno)?,
            });
        }
        let horizon = horizon
            .or_else(|| kicks.last().map(|k| k.time))
            .unwrap_or(0.0);
        let seq = Self { kicks, horizon };
        seq.validate()?;
        Ok(seq)
    }
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64> {
    s.parse().map_err(|_| {
        Error::Usage(format!(
            "line {}: cannot parse `{s}` as a number",
            lineno + 1
        ))
    })
}

/// The generator behind every realization with the given seed.
pub fn realization_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn exponential<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    let u: f64 = rng.sample(Open01);
    -mean * u.ln()
}

/// Draws one realization of the kick train on `(0, horizon]`.
pub fn sample_kicks(params: &NoiseParams) -> Result<KickSequence> {
    params.validate()?;
    let mut rng = realization_rng(params.seed);
    let mut kicks: Vec<Kick> = Vec::new();
    let mut t = 0.0;
    loop {
        let gap = exponential(&mut rng, params.dt_mean);
        let strength = exponential(&mut rng, params.gamma_mean);
        let next = t + gap;
        if next > params.horizon {
            break;
        }
        match kicks.last_mut() {
            // gap below one ulp of t: coincident impulses add up
            Some(last) if next <= last.time => last.strength += strength,
            _ => kicks.push(Kick {
                time: next,
                strength,
            }),
        }
        t = next;
    }
    Ok(KickSequence {
        kicks,
        horizon: params.horizon,
    })
}

fn common_horizon(seqs: &[KickSequence]) -> Result<f64> {
    let first = seqs
        .first()
        .ok_or_else(|| Error::Usage("at least one kick sequence is required".into()))?;
    if seqs.iter().any(|s| s.horizon != first.horizon) {
        return Err(Error::Usage("kick sequences must share a horizon".into()));
    }
    if !(first.horizon > 0.0) {
        return Err(Error::Usage(
            "kick sequences must have a positive horizon".into(),
        ));
    }
    Ok(first.horizon)
}

/// Time-averaged force `Σγ_i / (N_seq · T)`, an estimator of γλ.
pub fn empirical_force_mean(seqs: &[KickSequence]) -> Result<f64> {
    let horizon = common_horizon(seqs)?;
    let total: f64 = seqs.iter().map(KickSequence::total_impulse).sum();
    Ok(total / (seqs.len() as f64 * horizon))
}

/// Piecewise-constant force `F_k = Σ_{t_i ∈ bin k} γ_i / bin_width`.
fn binned_force(seq: &KickSequence, n_bins: usize, bin_width: f64) -> Vec<f64> {
    let mut bins = vec![0.0; n_bins];
    for k in &seq.kicks {
        let idx = ((k.time / bin_width) as usize).min(n_bins - 1);
        bins[idx] += k.strength / bin_width;
    }
    bins
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Binned autocovariance `⟨F(t)F(t+ℓ·bin_width)⟩` for lags `0..=max_lag`.
#[derive(Debug, Clone)]
pub struct Autocovariance {
    pub bin_width: f64,
    /// Realization-averaged value per lag.
    pub values: Vec<f64>,
    /// Standard error across realizations per lag.
    pub std_errors: Vec<f64>,
    /// Mean over lags `1..=max_lag` with its standard error across realizations.
    pub background: (f64, f64),
    pub n_sequences: usize,
}

impl Autocovariance {
    /// Weight of the lag-0 spike above the background, `(C_0 − background)·bin_width`.
    pub fn delta_weight(&self) -> f64 {
        (self.values[0] - self.background.0) * self.bin_width
    }
}

pub fn empirical_autocovariance(
    seqs: &[KickSequence],
    bin_width: f64,
    max_lag: usize,
) -> Result<Autocovariance> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(domain("bin_width", format!("must be > 0, got {bin_width}")));
    }
    if max_lag == 0 {
        return Err(domain("max_lag", "at least one nonzero lag is required"));
    }
    let horizon = common_horizon(seqs)?;
    let n_bins = (horizon / bin_width).floor() as usize;
    if n_bins <= 2 * max_lag {
        return Err(domain(
            "bin_width",
            format!("{n_bins} bins are too few for {max_lag} lags"),
        ));
    }
    let mut per_lag = vec![Vec::with_capacity(seqs.len()); max_lag + 1];
    let mut per_background = Vec::with_capacity(seqs.len());
    for seq in seqs {
        let f = binned_force(seq, n_bins, bin_width);
        let mut bg = 0.0;
        for (lag, column) in per_lag.iter_mut().enumerate() {
            let n = n_bins - lag;
            let c = f[..n]
                .iter()
                .zip(&f[lag..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64;
            if lag > 0 {
                bg += c;
            }
            column.push(c);
        }
        per_background.push(bg / max_lag as f64);
    }
    let (values, std_errors) = per_lag.iter().map(|c| mean_and_stderr(c)).unzip();
    Ok(Autocovariance {
        bin_width,
        values,
        std_errors,
        background: mean_and_stderr(&per_background),
        n_sequences: seqs.len(),
    })
}

/// One-sided power spectral density at the positive DFT frequencies of the horizon.
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    /// Angular frequencies `2πj/T`, `j = 1..n_bins/2`.
    pub omegas: Vec<f64>,
    pub density: Vec<f64>,
    pub std_errors: Vec<f64>,
}

impl PowerSpectrum {
    /// Mean density over `omega_lo <= ω <= omega_hi`.
    pub fn band_level(&self, omega_lo: f64, omega_hi: f64) -> Option<f64> {
        let band: Vec<f64> = self
            .omegas
            .iter()
            .zip(&self.density)
            .filter(|(w, _)| **w >= omega_lo && **w <= omega_hi)
            .map(|(_, d)| *d)
            .collect();
        (!band.is_empty()).then(|| band.iter().sum::<f64>() / band.len() as f64)
    }
}

/// Periodogram estimate of the force spectrum.
///
/// Each realization is histogrammed onto `n_bins` bins of the horizon and
/// Fourier transformed; `|X(ω)|²/T` averaged over realizations estimates
/// `∫C(τ)e^{−iωτ}dτ`, which is scaled by `2/√(2π)` to the one-sided symmetric
/// convention. At the DFT frequencies the mean term contributes nothing, so
/// the returned density estimates the white level only.
pub fn power_spectrum_estimate(seqs: &[KickSequence], n_bins: usize) -> Result<PowerSpectrum> {
    if n_bins < 4 {
        return Err(domain(
            "n_bins",
            format!("need at least 4 bins, got {n_bins}"),
        ));
    }
    let horizon = common_horizon(seqs)?;
    let bin_width = horizon / n_bins as f64;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_bins);
    let n_freq = n_bins / 2;
    let norm = 2.0 / ((2.0 * PI).sqrt() * horizon);
    let mut per_freq = vec![Vec::with_capacity(seqs.len()); n_freq];
    let mut buf = vec![Complex64::default(); n_bins];
    for seq in seqs {
        buf.iter_mut().for_each(|c| *c = Complex64::default());
        for k in &seq.kicks {
            let idx = ((k.time / bin_width) as usize).min(n_bins - 1);
            buf[idx].re += k.strength;
        }
        fft.process(&mut buf);
        for (j, column) in per_freq.iter_mut().enumerate() {
            column.push(buf[j + 1].norm_sqr() * norm);
        }
    }
    let (density, std_errors) = per_freq.iter().map(|c| mean_and_stderr(c)).unzip();
    Ok(PowerSpectrum {
        omegas: (1..=n_freq)
            .map(|j| 2.0 * PI * j as f64 / horizon)
            .collect(),
        density,
        std_errors,
    })
}

/// Kolmogorov–Smirnov distance between `samples` and the exponential law with `mean`.
pub fn ks_statistic_exponential(samples: &[f64], mean: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x / mean).exp();
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic two-sided KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Gaps `t_i − t_{i−1}` (with `t_0 = 0`) of a sequence.
pub fn gaps(seq: &KickSequence) -> Vec<f64> {
    let mut last = 0.0;
    seq.kicks
        .iter()
        .map(|k| {
            let g = k.time - last;
            last = k.time;
            g
        })
        .collect()
}

/// Force statistics estimated over many realizations beside their analytic values.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseStatistics {
    pub params: NoiseParams,
    pub n_samples: usize,
    pub mean_force: f64,
    /// Autocovariance background over nonzero lags with its standard error.
    pub background: (f64, f64),
    /// Mean one-sided spectral density over all positive DFT frequencies.
    pub white_level: f64,
}

impl NoiseStatistics {
    pub fn mean_force_error(&self) -> f64 {
        (self.mean_force / self.params.mean_force() - 1.0).abs()
    }

    /// Distance of the background from γ²λ² in standard errors.
    pub fn background_z(&self) -> f64 {
        (self.background.0 - self.params.covariance_background()).abs() / self.background.1
    }

    pub fn white_level_error(&self) -> f64 {
        (self.white_level / self.params.spectral_white_level() - 1.0).abs()
    }

    /// Mean within 1%, background within 3 standard errors, white level within 5%.
    pub fn checks(&self) -> [(&'static str, bool); 3] {
        [
            ("mean force", self.mean_force_error() <= 0.01),
            ("autocovariance background", self.background_z() <= 3.0),
            ("spectral white level", self.white_level_error() <= 0.05),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn report(&self) -> String {
        let p = &self.params;
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let [mean, bg, white] = self.checks();
        format!(
            "realizations {n}, horizon {h} a.u., gamma {g}, mean interval {d} a.u.\n\
             mean force        {mf:.6e}  analytic {amf:.6e}  rel. error {emf:.3e}  {v1}\n\
             covariance bg     {b:.6e} +- {be:.2e}  analytic {ab:.6e}  {z:.2} std. errors  {v2}\n\
             white level       {w:.6e}  analytic {aw:.6e}  rel. error {ew:.3e}  {v3}\n",
            n = self.n_samples,
            h = p.horizon,
            g = p.gamma_mean,
            d = p.dt_mean,
            mf = self.mean_force,
            amf = p.mean_force(),
            emf = self.mean_force_error(),
            v1 = verdict(mean.1),
            b = self.background.0,
            be = self.background.1,
            ab = p.covariance_background(),
            z = self.background_z(),
            v2 = verdict(bg.1),
            w = self.white_level,
            aw = p.spectral_white_level(),
            ew = self.white_level_error(),
            v3 = verdict(white.1),
        )
    }
}

/// Samples `n_samples` realizations (seeds derived from `params.seed`) and
/// estimates the mean force, autocovariance background and white level.
pub fn noise_statistics(
    params: &NoiseParams,
    n_samples: usize,
    bin_width: f64,
    max_lag: usize,
    spectrum_bins: usize,
) -> Result<NoiseStatistics> {
    params.validate()?;
    if !(params.horizon > 0.0) {
        return Err(Error::Usage(
            "noise statistics need a positive horizon".into(),
        ));
    }
    if n_samples < 2 {
        return Err(domain("n_samples", "must be >= 2"));
    }
    let seqs = (0..n_samples)
        .map(|j| {
            sample_kicks(&NoiseParams {
                seed: crate::ensemble::derive_seed(params.seed, j),
                ..*params
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_force = empirical_force_mean(&seqs)?;
    let cov = empirical_autocovariance(&seqs, bin_width, max_lag)?;
    let spectrum = power_spectrum_estimate(&seqs, spectrum_bins)?;
    let white_level = spectrum.density.iter().sum::<f64>() / spectrum.density.len() as f64;
    Ok(NoiseStatistics {
        params: *params,
        n_samples,
        mean_force,
        background: cov.background,
        white_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, dt: f64, horizon: f64, seed: u64) -> NoiseParams {
        NoiseParams {
            gamma_mean: gamma,
            dt_mean: dt,
            horizon,
            seed,
        }
    }

    #[test]
    fn zero_horizon_gives_empty_sequence() {
        let seq = sample_kicks(&params(0.9, 1.0, 0.0, 7)).unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = params(0.9, 2.0 * PI * 0.2, 500.0, 42);
        assert_eq!(sample_kicks(&p).unwrap(), sample_kicks(&p).unwrap());
        let other = sample_kicks(&NoiseParams { seed: 43, ..p }).unwrap();
        assert_ne!(sample_kicks(&p).unwrap(), other);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            sample_kicks(&params(0.0, 1.0, 1.0, 0)),
            Err(Error::Domain {
                name: "gamma_mean",
                ..
            })
        ));
        assert!(matches!(
            sample_kicks(&params(1.0, -1.0, 1.0, 0)),
            Err(Error::Domain {
                name: "dt_mean",
                ..
            })
        ));
        assert!(sample_kicks(&params(1.0, 1.0, -1.0, 0)).is_err());
        assert!(sample_kicks(&params(f64::NAN, 1.0, 1.0, 0)).is_err());
    }

    #[test]
    fn kick_count_for_100_fs_horizon() {
        // λT with ⟨Δt⟩ = 0.2·2π and T = 100 fs in atomic units
        let horizon = 100.0 / 0.024188843;
        let dt = 2.0 * PI * 0.2;
        let expected = horizon / dt;
        assert!((expected - 3290.0).abs() < 1.0);
        for seed in 0..5 {
            let seq = sample_kicks(&params(0.9, dt, horizon, seed)).unwrap();
            let dev = (seq.len() as f64 - expected).abs();
            assert!(
                dev < 3.0 * expected.sqrt(),
                "seed {seed}: {} kicks",
                seq.len()
            );
            seq.validate().unwrap();
        }
    }

    #[test]
    fn force_mean_of_single_kick() {
        let seq = KickSequence {
            kicks: vec![Kick {
                time: 1.0,
                strength: 2.0,
            }],
            horizon: 4.0,
        };
        assert_eq!(empirical_force_mean(&[seq]).unwrap(), 0.5);
        assert_eq!(
            empirical_force_mean(&[KickSequence::empty(3.0), KickSequence::empty(3.0)]).unwrap(),
            0.0
        );
        assert!(matches!(empirical_force_mean(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn autocovariance_of_empty_sequence_is_zero() {
        let cov = empirical_autocovariance(&[KickSequence::empty(100.0)], 1.0, 5).unwrap();
        assert!(cov.values.iter().all(|&v| v == 0.0));
        assert!(matches!(
            empirical_autocovariance(&[KickSequence::empty(100.0)], 0.0, 5),
            Err(Error::Domain {
                name: "bin_width",
                ..
            })
        ));
    }

    #[test]
    fn analytic_white_level() {
        let p = params(0.5, 2.0 * PI, 1.0, 0);
        assert!((p.spectral_white_level() - 0.0635).abs() < 5e-5);
        let p2 = NoiseParams {
            gamma_mean: 1.0,
            ..p
        };
        assert!((p2.spectral_white_level() / p.spectral_white_level() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn text_export_round_trips() {
        let seq = sample_kicks(&params(0.7, 3.0, 200.0, 11)).unwrap();
        let text = seq.to_text();
        let back = KickSequence::read_text(text.as_bytes()).unwrap();
        assert_eq!(seq, back);
    }

    #[test]
    fn read_text_rejects_unsorted_input() {
        let text = "# horizon_au = 10\n2.0 1.0\n1.0 1.0\n";
        assert!(KickSequence::read_text(text.as_bytes()).is_err());
        let text = "1.0 -1.0\n";
        assert!(KickSequence::read_text(text.as_bytes()).is_err());
    }

    #[test]
    fn gaps_and_strengths_pass_ks_at_one_percent() {
        let dt = 2.0 * PI;
        let gamma = 0.5;
        let p = params(gamma, dt, dt * 1.05e5, 2024);
        let seq = sample_kicks(&p).unwrap();
        let g = gaps(&seq);
        assert!(g.len() > 100_000);
        let g = &g[..100_000];
        let s: Vec<f64> = seq.kicks[..100_000].iter().map(|k| k.strength).collect();
        let crit = ks_critical_1pct(100_000);
        assert!(ks_statistic_exponential(g, dt) < crit);
        assert!(ks_statistic_exponential(&s, gamma) < crit);
    }

    #[test]
    fn ks_detects_wrong_mean() {
        let p = params(1.0, 1.0, 2e4, 3);
        let g = gaps(&sample_kicks(&p).unwrap());
        assert!(ks_statistic_exponential(&g, 1.2) > ks_critical_1pct(g.len()));
    }
}

//! Bessel functions J₀, J₁ of real argument and the zeros of J₀.
//!
//! Three regimes, each accurate to a few ulps of 1 in absolute terms:
//! power series for |x| ≤ 8, Miller's backward recurrence normalised by
//! `J₀ + 2ΣJ₂ₖ = 1` for 8 < |x| < 25, and the Hankel asymptotic expansion
//! for |x| ≥ 25 (its smallest term there is below 1e-20).

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        series(ax, 0)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).0
    } else {
        asymptotic(ax, 0)
    }
}

pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        series(ax, 1)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).1
    } else {
        asymptotic(ax, 1)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J_ν(x) = (x/2)^ν Σ_k (−x²/4)^k / (k! (k+ν)!)` for ν ∈ {0, 1}.
fn series(x: f64, order: u32) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * (k + order as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2.0 {
            break;
        }
    }
    sum
}

/// Returns (J₀(x), J₁(x)) by downward recurrence from an order well above x.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 40) / 2);
    let mut above = 0.0; // J_{n+1}
    let mut current = 1e-30; // J_n
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for n in (1..=start).rev() {
        let below = 2.0 * n as f64 / x * current - above;
        above = current;
        current = below;
        // `current` now holds J_{n-1}
        if n - 1 == 1 {
            j1 = current;
        }
        if (n - 1) % 2 == 0 && n - 1 > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += current;
    (current / norm, j1 / norm)
}

/// Hankel expansion `J_ν(x) = √(2/(πx)) (P cos χ − Q sin χ)`, `χ = x − (ν/2 + 1/4)π`.
fn asymptotic(x: f64, order: u32) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a: f64 = 1.0; // a_k / x^k
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        if a.abs() > prev || a.abs() < 1e-20 {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        let kk = (k + 1) as f64;
        a *= (mu - (2.0 * kk - 1.0).powi(2)) / (kk * 8.0 * x);
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// The first `count` positive zeros of J₀, in increasing order.
pub fn bessel_j0_zeros(count: usize) -> Vec<f64> {
    (1..=count).map(j0_zero).collect()
}

fn j0_zero(k: usize) -> f64 {
    // McMahon's expansion as the starting point, then safeguarded Newton.
    let beta = (k as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    let guess = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3));
    let (mut lo, mut hi) = (guess - 0.4, guess + 0.4);
    if j0(lo) * j0(hi) > 0.0 {
        lo = (k as f64 - 1.0) * PI;
        hi = k as f64 * PI;
    }
    let mut x = guess;
    for _ in 0..100 {
        let f = j0(x);
        if f == 0.0 {
            return x;
        }
        if f * j0(lo) < 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x + f / j1(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.5, 0.938_469_807_240_812_9, 0.242_268_457_674_873_89),
        (3.0, -0.260_051_954_901_933_44, 0.339_058_958_525_936_46),
        (7.9, 0.194_361_844_841_278_24, 0.219_179_399_921_751_2),
        (8.1, 0.147_517_454_044_377_67, 0.247_607_766_981_592_88),
        (12.0, 0.047_689_310_796_833_537, -0.223_447_104_490_627_61),
        (20.0, 0.167_024_664_340_583_15, 0.066_833_124_175_850_046),
        (30.0, -0.086_367_983_581_040_211, -0.118_751_062_616_622_94),
        (55.5, -0.028_104_074_301_152_396, -0.103_603_005_895_933_63),
    ];

    #[test]
    fn matches_high_precision_values() {
        for &(x, r0, r1) in REFERENCE {
            assert!((j0(x) - r0).abs() < 1e-14, "J0({x}) = {} vs {r0}", j0(x));
            assert!((j1(x) - r1).abs() < 1e-14, "J1({x}) = {} vs {r1}", j1(x));
            assert_eq!(j0(-x), j0(x));
            assert_eq!(j1(-x), -j1(x));
        }
    }

    #[test]
    fn regimes_agree_at_the_switch_points() {
        for x in [7.0, 7.5, 8.0] {
            assert!((series(x, 0) - miller(x).0).abs() < 1e-14, "J0 at {x}");
            assert!((series(x, 1) - miller(x).1).abs() < 1e-14, "J1 at {x}");
        }
        for x in [24.0, 25.0, 26.0] {
            assert!((asymptotic(x, 0) - miller(x).0).abs() < 1e-14, "J0 at {x}");
            assert!((asymptotic(x, 1) - miller(x).1).abs() < 1e-14, "J1 at {x}");
        }
    }

    #[test]
    fn first_zeros() {
        let z = bessel_j0_zeros(3);
        let reference = [
            2.404_825_557_695_772_8,
            5.520_078_110_286_310_6,
            8.653_727_912_911_012_2,
        ];
        for (a, b) in z.iter().zip(reference) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let z = bessel_j0_zeros(33);
        assert!((z[8] - 27.493_479_132_040_254_8).abs() < 1e-12);
        assert!((z[16] - 52.624_051_841_114_996).abs() < 1e-12);
        assert!((z[32] - 102.888_374_254_194_79).abs() < 1e-12);
    }

    #[test]
    fn zeros_are_roots_and_spaced_by_pi() {
        let z = bessel_j0_zeros(60);
        for &r in &z {
            assert!(j0(r).abs() < 1e-10);
        }
        assert!(z.windows(2).all(|w| w[1] > w[0]));
        assert!((z[59] - z[58] - PI).abs() < 1e-3);
    }
}

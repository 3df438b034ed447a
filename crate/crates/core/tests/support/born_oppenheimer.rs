//! Born–Oppenheimer reference for the H₂⁺ ground state.
//!
//! The clamped-nuclei electronic Hamiltonian `−β(∂²_z + ∇²_ρ) + V(ρ, z; R)`
//! is diagonalised at fixed R by Lanczos iteration on the same (Bessel mode,
//! z) basis the propagator uses. The resulting 1sσ_g curve (including 1/R)
//! is then used in a Colbert–Miller sinc-DVR for `−M_p⁻¹ ∂²_R`, giving the
//! vibrational ground level and ⟨R⟩.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use noisemol::h2plus::{coulomb_potential, H2Geometry, H2Params};
use num_complex::Complex64;
use rustfft::FftPlanner;

pub struct Electronic<'a> {
    geometry: &'a H2Geometry,
    beta: f64,
}

impl<'a> Electronic<'a> {
    pub fn new(geometry: &'a H2Geometry, params: &H2Params) -> Self {
        Self {
            geometry,
            beta: params.beta(),
        }
    }

    fn dims(&self) -> (usize, usize) {
        (self.geometry.rho().n_modes(), self.geometry.z().len())
    }

    /// Applies the electronic Hamiltonian at fixed `r` to weighted grid values `x` (mode-major).
    fn apply(&self, r: f64, potential: &[f64], x: &[f64]) -> Vec<f64> {
        let (nm, nz) = self.dims();
        let basis = self.geometry.rho();
        let k = self.geometry.z().wavenumbers();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(nz);
        let inv = planner.plan_fft_inverse(nz);

        // ρ part through mode space, z part through Fourier space
        let mut out = vec![0.0; nm * nz];
        let mut column = vec![0.0; nm];
        for j in 0..nz {
            for m in 0..nm {
                column[m] = x[m * nz + j];
            }
            let modes: Vec<f64> = basis
                .forward(&column)
                .iter()
                .zip(basis.eigenvalues())
                .map(|(c, l)| self.beta * l * c)
                .collect();
            for (m, v) in basis.backward(&modes).iter().enumerate() {
                out[m * nz + j] += v;
            }
        }
        for m in 0..nm {
            let mut line: Vec<Complex64> = x[m * nz..(m + 1) * nz]
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect();
            fwd.process(&mut line);
            for (c, k) in line.iter_mut().zip(&k) {
                *c *= self.beta * k * k / nz as f64;
            }
            inv.process(&mut line);
            for (j, c) in line.iter().enumerate() {
                out[m * nz + j] += c.re;
            }
        }
        let _ = r;
        for ((o, v), xi) in out.iter_mut().zip(potential).zip(x) {
            *o += v * xi;
        }
        out
    }

    /// Lowest eigenvalue with a z-even start vector; Lanczos with full reorthogonalisation.
    pub fn ground_energy(&self, r: f64, iterations: usize) -> f64 {
        let (nm, nz) = self.dims();
        let rhos = self.geometry.rho().points();
        let zs = self.geometry.z().points();
        let potential: Vec<f64> = (0..nm * nz)
            .map(|idx| coulomb_potential(rhos[idx / nz], zs[idx % nz], r).unwrap())
            .collect();
        let weights = self.geometry.rho().weights();
        let mut v: Vec<f64> = (0..nm * nz)
            .map(|idx| {
                let (rho, z) = (rhos[idx / nz], zs[idx % nz]);
                let a = (rho * rho + (z - 0.5 * r).powi(2)).sqrt();
                let b = (rho * rho + (z + 0.5 * r).powi(2)).sqrt();
                weights[idx / nz].sqrt() * ((-a).exp() + (-b).exp())
            })
            .collect();
        normalise(&mut v);

        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut last = f64::INFINITY;
        for it in 0..iterations {
            let mut w = self.apply(r, &potential, &v);
            let a = dot(&w, &v);
            alpha.push(a);
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi -= a * vi;
            }
            if let Some(prev) = basis.last() {
                let b = *beta.last().unwrap();
                for (wi, pi) in w.iter_mut().zip(prev) {
                    *wi -= b * pi;
                }
            }
            basis.push(v.clone());
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let b = dot(&w, &w).sqrt();
            if it % 10 == 9 || b < 1e-12 {
                let e = lowest_tridiagonal(&alpha, &beta);
                if (e - last).abs() < 1e-12 || b < 1e-12 {
                    return e;
                }
                last = e;
            }
            beta.push(b);
            v = w.iter().map(|x| x / b).collect();
        }
        lowest_tridiagonal(&alpha, &beta[..alpha.len() - 1])
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalise(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn lowest_tridiagonal(alpha: &[f64], beta: &[f64]) -> f64 {
    let n = alpha.len();
    let t = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    SymmetricEigen::new(t).eigenvalues.min()
}

pub struct Vibrational {
    pub energy: f64,
    pub mean_r: f64,
    /// `(R, |χ(R)|²)` density per a.u. on the DVR points.
    pub density: Vec<(f64, f64)>,
}

/// Sinc-DVR ground level of `−(1/M_p) ∂²_R + E(R)` on a uniform R grid.
pub fn vibrational_ground(r_points: &[f64], curve: &[f64], params: &H2Params) -> Vibrational {
    let n = r_points.len();
    let h = r_points[1] - r_points[0];
    let scale = params.vib_mass_factor() / (h * h);
    let hamiltonian = DMatrix::from_fn(n, n, |i, j| {
        let kinetic = if i == j {
            scale * std::f64::consts::PI.powi(2) / 3.0
        } else {
            let d = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            scale * sign * 2.0 / (d * d)
        };
        kinetic + if i == j { curve[i] } else { 0.0 }
    });
    let eig = SymmetricEigen::new(hamiltonian);
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let chi: DVector<f64> = eig.eigenvectors.column(k).into();
    let mean_r = r_points
        .iter()
        .zip(chi.iter())
        .map(|(r, c)| r * c * c)
        .sum();
    let density = r_points
        .iter()
        .zip(chi.iter())
        .map(|(&r, c)| (r, c * c / h))
        .collect();
    Vibrational {
        energy,
        mean_r,
        density,
    }
}

pub struct Reference {
    pub energy: f64,
    pub mean_r: f64,
    pub equilibrium_energy: f64,
    pub vibrational: Vibrational,
}

/// Full oracle: electronic curve on `[r_lo, r_hi]` with `n` points, then the vibrational level.
pub fn born_oppenheimer_ground(
    geometry: &H2Geometry,
    params: &H2Params,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Reference {
    let el = Electronic::new(geometry, params);
    let rs: Vec<f64> = (0..n)
        .map(|i| r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let curve: Vec<f64> = rs.iter().map(|&r| el.ground_energy(r, 600)).collect();
    let equilibrium_energy = curve.iter().cloned().fold(f64::INFINITY, f64::min);
    let vibrational = vibrational_ground(&rs, &curve, params);
    Reference {
        energy: vibrational.energy,
        mean_r: vibrational.mean_r,
        equilibrium_energy,
        vibrational,
    }
}

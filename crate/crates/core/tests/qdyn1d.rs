use noisemol::qdyn1d::*;
use noisemol::shotnoise::{sample_kicks, Kick, KickSequence, NoiseParams};
use noisemol::spectral::UniformGrid;
use num_complex::Complex64;

fn gaussian(grid: &UniformGrid, x0: f64, sigma: f64, p0: f64) -> Wavefunction1D {
    let mut psi = Wavefunction1D::from_fn(grid, |x| {
        Complex64::from_polar((-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp(), p0 * x)
    });
    psi.normalize();
    psi
}

fn free(grid: &UniformGrid, mass_factor: f64) -> Hamiltonian1D {
    Hamiltonian1D::new(grid.clone(), mass_factor, |_| 0.0, &Absorber1D::none())
}

#[test]
fn free_gaussian_spreads_as_the_analytic_packet() {
    let grid = UniformGrid::new(2048, -150.0, 150.0).unwrap();
    let (sigma0, p0, m_f) = (1.5, 0.4, 0.5);
    let mut psi = gaussian(&grid, -20.0, sigma0, p0);
    let reference = psi.clone();
    let ham = free(&grid, m_f);
    let opts = PropagateOptions {
        dt: 0.05,
        final_time: 50.0,
        record_every: 1000,
        seed: None,
    };
    propagate_kicked(
        &mut psi,
        &ham,
        &KickSequence::empty(50.0),
        1.0,
        &reference,
        &opts,
    )
    .unwrap();
    let t = 50.0;
    // σ(t)² = σ0² (1 + (m_f t / σ0²)²), centre moves at group velocity 2 m_f p0
    let expected_var = sigma0 * sigma0 * (1.0 + (m_f * t / (sigma0 * sigma0)).powi(2));
    let (mean, var) = psi.position_moments();
    assert!(
        ((var - expected_var) / expected_var).abs() < 1e-6,
        "variance {var} vs {expected_var}"
    );
    assert!((mean - (-20.0 + 2.0 * m_f * p0 * t)).abs() < 1e-6);
    assert!((psi.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn relaxed_morse_matches_closed_form() {
    let params = MorseParams::hf();
    let grid = default_morse_grid();
    let ham = Hamiltonian1D::new(
        grid.clone(),
        params.mass_factor(),
        |x| morse_potential(x, &params),
        &Absorber1D::none(),
    );
    let opts = RelaxOptions {
        dt_imag: 1.0,
        tol: 1e-13,
        ..RelaxOptions::default()
    };
    let (relaxed, e) = relax_ground_state(&ham, &opts).unwrap();
    let exact = morse_eigenenergy(0, &params).unwrap();
    assert!((e - exact).abs() < 1e-5, "{e} vs {exact}");
    let analytic = morse_ground_state(&grid, &params).unwrap();
    assert!((ham.energy(&analytic) - exact).abs() < 1e-9);
    assert!(relaxed.survival(&analytic) > 1.0 - 1e-6);
}

#[test]
fn softcore_ground_energy_is_hydrogenic() {
    let grid = default_atom_grid();
    let atom = Model1D::atom(
        SoftCoreParams::default(),
        grid.clone(),
        default_atom_absorber(&grid),
        &RelaxOptions::default(),
    )
    .unwrap();
    assert!(
        (atom.ground_energy + 0.5).abs() < 1e-3,
        "{}",
        atom.ground_energy
    );
    assert!((atom.ground_state.norm() - 1.0).abs() < 1e-10);
    let (mean, _) = atom.ground_state.position_moments();
    assert!(mean.abs() < 1e-8);
}

#[test]
fn kick_times_are_not_snapped_to_the_step_grid() {
    // Free evolution and kicks commute exactly under the split scheme, so any
    // dependence on dt would come from kick placement alone.
    let grid = UniformGrid::new(1024, -80.0, 80.0).unwrap();
    let ham = free(&grid, 0.5);
    let kicks = KickSequence {
        kicks: vec![
            Kick {
                time: 0.013,
                strength: 0.3,
            },
            Kick {
                time: 0.031,
                strength: 0.1,
            },
            Kick {
                time: 1.237,
                strength: 0.25,
            },
            Kick {
                time: 2.5,
                strength: 0.2,
            },
            Kick {
                time: 3.9001,
                strength: 0.15,
            },
        ],
        horizon: 5.0,
    };
    let run = |dt: f64| {
        let mut psi = gaussian(&grid, 0.0, 1.0, 0.0);
        let reference = psi.clone();
        let opts = PropagateOptions {
            dt,
            final_time: 5.0,
            record_every: (1.0 / dt).round() as usize,
            seed: None,
        };
        let series = propagate_kicked(&mut psi, &ham, &kicks, 1.0, &reference, &opts).unwrap();
        (series, psi.position_moments())
    };
    let (coarse, coarse_moments) = run(0.1);
    let (fine, fine_moments) = run(0.05);
    assert_eq!(coarse.times(), fine.times());
    for (a, b) in coarse
        .column("survival")
        .iter()
        .zip(fine.column("survival"))
    {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    assert!((coarse_moments.0 - fine_moments.0).abs() < 1e-8);
    assert!((coarse_moments.1 - fine_moments.1).abs() < 1e-8);
    // ⟨x⟩ = Σ −γ_i (t_f − t_i) · 2 m_f
    let drift: f64 = kicks
        .kicks
        .iter()
        .map(|k| -k.strength * (5.0 - k.time))
        .sum();
    assert!((coarse_moments.0 - drift).abs() < 1e-8);
}

#[test]
fn default_step_is_converged_against_half_step() {
    let grid = default_atom_grid();
    let atom = Model1D::atom(
        SoftCoreParams::default(),
        grid.clone(),
        default_atom_absorber(&grid),
        &RelaxOptions::default(),
    )
    .unwrap();
    let noise = NoiseParams {
        gamma_mean: 0.3,
        dt_mean: 2.0 * std::f64::consts::PI,
        horizon: 100.0,
        seed: 11,
    };
    let kicks = sample_kicks(&noise).unwrap();
    let run = |dt: f64, every: usize| {
        atom.run(
            &kicks,
            &PropagateOptions {
                dt,
                final_time: 100.0,
                record_every: every,
                seed: Some(11),
            },
        )
        .unwrap()
    };
    let coarse = run(0.05, 100);
    let fine = run(0.025, 200);
    assert_eq!(coarse.times(), fine.times());
    for col in ["survival", "norm"] {
        for (a, b) in coarse.column(col).iter().zip(fine.column(col)) {
            assert!((a - b).abs() < 1e-4, "{col}: {a} vs {b}");
        }
    }
}

#[test]
fn energy_is_conserved_between_kicks() {
    let grid = UniformGrid::new(1024, -100.0, 100.0).unwrap();
    let params = SoftCoreParams::default();
    let atom = Model1D::atom(params, grid, Absorber1D::none(), &RelaxOptions::default()).unwrap();
    let opts = PropagateOptions {
        dt: 0.05,
        final_time: 50.0,
        record_every: 100,
        seed: None,
    };
    let series = atom.run(&KickSequence::empty(50.0), &opts).unwrap();
    let e = series.column("energy_au");
    for v in &e {
        assert!(((v - e[0]) / e[0]).abs() < 1e-8, "{v} vs {}", e[0]);
    }
    for n in series.column("norm") {
        assert!((n - 1.0).abs() < 1e-10);
    }
}

#[test]
fn momentum_follows_the_impulses() {
    // free particle: ⟨p⟩ changes only at kicks, by −coupling·γ
    let grid = UniformGrid::new(1024, -100.0, 100.0).unwrap();
    let ham = free(&grid, 0.5);
    let mut psi = gaussian(&grid, 0.0, 2.0, 0.2);
    let reference = psi.clone();
    let kicks = KickSequence {
        kicks: vec![
            Kick {
                time: 0.7,
                strength: 0.05,
            },
            Kick {
                time: 1.3,
                strength: 0.08,
            },
        ],
        horizon: 2.0,
    };
    let opts = PropagateOptions {
        dt: 0.05,
        final_time: 2.0,
        record_every: 40,
        seed: None,
    };
    propagate_kicked(&mut psi, &ham, &kicks, 3.0, &reference, &opts).unwrap();
    assert!((psi.momentum_expectation() - (0.2 - 3.0 * 0.13)).abs() < 1e-10);
}

#[test]
fn absorber_only_removes_norm() {
    let grid = UniformGrid::new(512, -40.0, 40.0).unwrap();
    let absorber = Absorber1D {
        left_width: 10.0,
        right_width: 10.0,
        strength: 1.0,
    };
    let ham = Hamiltonian1D::new(grid.clone(), 0.5, |_| 0.0, &absorber);
    let mut psi = gaussian(&grid, 0.0, 1.0, 2.0);
    let reference = psi.clone();
    let opts = PropagateOptions {
        dt: 0.05,
        final_time: 60.0,
        record_every: 20,
        seed: None,
    };
    let series = propagate_kicked(
        &mut psi,
        &ham,
        &KickSequence::empty(60.0),
        1.0,
        &reference,
        &opts,
    )
    .unwrap();
    let norms = series.column("norm");
    assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-13), "{norms:?}");
    assert!(
        *norms.last().unwrap() < 1e-2,
        "packet should be absorbed, norm {}",
        norms.last().unwrap()
    );
}

#[test]
fn csv_has_the_documented_columns() {
    let grid = UniformGrid::new(128, -10.0, 10.0).unwrap();
    let ham = Hamiltonian1D::new(grid.clone(), 0.5, |x| 0.5 * x * x, &Absorber1D::none());
    let mut psi = gaussian(&grid, 0.0, 0.7, 0.0);
    let reference = psi.clone();
    let opts = PropagateOptions {
        dt: 0.1,
        final_time: 1.0,
        record_every: 3,
        seed: None,
    };
    let series = propagate_kicked(
        &mut psi,
        &ham,
        &KickSequence::empty(1.0),
        1.0,
        &reference,
        &opts,
    )
    .unwrap();
    let csv = series.to_csv();
    assert!(csv.starts_with("time_au,norm,survival,energy_au\n"));
    // records at steps 0, 3, 6, 9 and the final step 10
    assert_eq!(series.len(), 5);
    assert!((series.times()[4] - 1.0).abs() < 1e-15);
}

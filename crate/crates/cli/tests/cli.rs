use std::fs;
use std::path::Path;
use std::process::Command;

use noisemol_cli::{
    cmd_ensemble, cmd_relax, cmd_run, cmd_sweep, cmd_validate_noise, parse_axis, CliError,
    ModelSelector, Overrides, SimConfig, SweepAxis,
};

fn morse_config(dir: &Path) -> SimConfig {
    let text = format!(
        "model = \"morse1d\"\nout_dir = {:?}\nrecord_every = 50\n\
         [noise]\ngamma_mean = 0.5\nspacing_over_te = 0.5\nfinal_time_fs = 0.5\n\
         [ensemble]\nn_realizations = 4\nmaster_seed = 11\n",
        dir.display().to_string()
    );
    SimConfig::parse(&text).unwrap()
}

fn config_message(e: CliError) -> String {
    assert_eq!(e.exit_code(), 2, "{e}");
    match e {
        CliError::Config(m) => m,
        other => panic!("expected a configuration error, got {other}"),
    }
}

#[test]
fn empty_config_materialises_the_h2_defaults() {
    let c = SimConfig::parse("").unwrap();
    assert_eq!(c.model, ModelSelector::H2plus);
    let h = &c.h2plus;
    assert_eq!((h.z_points, h.r_points, h.n_modes), (1024, 256, 16));
    assert_eq!(
        (h.rho_max, h.z_ionization, h.r_dissociation),
        (8.0, 32.0, 9.5)
    );
    assert_eq!((h.z_max, h.r_min, h.r_max), (50.0, 0.38, 24.0));
    let text = c.to_toml();
    for key in [
        "z_points = 1024",
        "r_dissociation = 9.5",
        "gamma_mean = 0.9",
        "proton_mass = 1836.152673",
    ] {
        assert!(text.contains(key), "missing `{key}` in\n{text}");
    }
}

#[test]
fn canonical_form_round_trips_byte_for_byte() {
    let c =
        SimConfig::parse("model = \"atom1d\"\n[noise]\ngamma_mean = 0.3\n[h2plus]\nn_modes = 8\n")
            .unwrap();
    let once = c.to_toml();
    let back = SimConfig::parse(&once).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_toml(), once);
}

#[test]
fn bad_values_name_their_key() {
    let m = config_message(SimConfig::parse("[noise]\ngamma_mean = -0.5\n").unwrap_err());
    assert!(m.contains("noise.gamma_mean"), "{m}");
    let m = config_message(SimConfig::parse("[h2plus]\nr_dissociation = 30.0\n").unwrap_err());
    assert!(m.contains("r_dissociation"), "{m}");
}

#[test]
fn unknown_keys_and_type_errors_are_located() {
    let m = config_message(
        SimConfig::parse("model = \"h2plus\"\n[noise]\ngama_mean = 0.5\n").unwrap_err(),
    );
    assert!(m.contains("gama_mean") && m.contains("line 3"), "{m}");
    let m = config_message(SimConfig::parse("record_every = \"often\"\n").unwrap_err());
    assert!(m.contains("line 1"), "{m}");
    let m = config_message(SimConfig::parse("model = \"helium\"\n").unwrap_err());
    assert!(m.contains("helium"), "{m}");
}

#[test]
fn axis_syntax() {
    assert_eq!(
        parse_axis("spacing:0.1,0.5, 2").unwrap(),
        (SweepAxis::Spacing, vec![0.1, 0.5, 2.0])
    );
    assert_eq!(
        parse_axis("gamma_mean:0.9").unwrap(),
        (SweepAxis::Gamma, vec![0.9])
    );
    for bad in ["spacing", "mass:1", "gamma:0.5,x", "gamma:-1"] {
        assert_eq!(parse_axis(bad).unwrap_err().exit_code(), 2, "{bad}");
    }
}

#[test]
fn noise_validation_passes_on_defaults_and_rejects_zero_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = SimConfig::parse("[noise]\ngamma_mean = 0.5\n").unwrap();
    c.out_dir = dir.path().to_path_buf();
    let stats = cmd_validate_noise(&c).unwrap();
    assert!(stats.mean_force_error() < 0.01, "{}", stats.report());
    assert!(stats.report().contains("white level"));
    assert!(dir.path().join("noise_report.txt").exists());

    c.validate.horizon_au = 0.0;
    let e = cmd_validate_noise(&c).unwrap_err();
    assert!(
        matches!(e, CliError::Engine(noisemol::Error::Usage(_))),
        "{e}"
    );
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn run_directory_is_sufficient_for_replay() {
    let dir = tempfile::tempdir().unwrap();
    let c = morse_config(&dir.path().join("first"));
    let series = cmd_run(&c).unwrap();
    let first = dir.path().join("first");
    for f in [
        "config.toml",
        "seeds.txt",
        "VERSION",
        "series.csv",
        "kicks.txt",
    ] {
        assert!(first.join(f).exists(), "{f} missing");
    }
    assert!(series.len() > 2);

    // replay from the written configuration alone
    let text = fs::read_to_string(first.join("config.toml")).unwrap();
    let replay = Overrides {
        out_dir: Some(dir.path().join("second")),
        ..Overrides::default()
    }
    .apply(SimConfig::parse(&text).unwrap())
    .unwrap();
    cmd_run(&replay).unwrap();
    assert_eq!(
        fs::read(first.join("series.csv")).unwrap(),
        fs::read(dir.path().join("second/series.csv")).unwrap()
    );
    let stamp = fs::read_to_string(first.join("VERSION")).unwrap();
    assert!(stamp.starts_with(&format!("noisemol {}", noisemol::VERSION)));
    assert!(stamp.contains("fs_per_au 0.024188843"));
}

#[test]
fn worker_count_leaves_ensemble_output_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = morse_config(&dir.path().join("one"));
    let a = cmd_ensemble(&c).unwrap();
    c.out_dir = dir.path().join("four");
    c.ensemble.workers = 4;
    let b = cmd_ensemble(&c).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        fs::read(dir.path().join("one/mean.csv")).unwrap(),
        fs::read(dir.path().join("four/mean.csv")).unwrap()
    );
    let seeds = fs::read_to_string(dir.path().join("one/seeds.txt")).unwrap();
    assert_eq!(seeds.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn single_point_sweep_equals_plain_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = morse_config(&dir.path().join("ens"));
    let ens = cmd_ensemble(&c).unwrap();
    c.out_dir = dir.path().join("sweep");
    let rows = cmd_sweep(&c, SweepAxis::Spacing, &[0.5]).unwrap();
    assert_eq!(rows.len(), 1);
    let (name, mean, err) = &rows[0].finals[0];
    assert_eq!(name, "survival");
    assert_eq!(*mean, ens.mean.last("survival").unwrap());
    assert_eq!(*err, ens.std_error.last("survival").unwrap());
    let table = fs::read_to_string(dir.path().join("sweep/sweep.csv")).unwrap();
    assert!(table.starts_with("spacing_over_te,survival,survival_stderr,norm,norm_stderr\n"));
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn relax_reports_the_morse_ground_energy() {
    let dir = tempfile::tempdir().unwrap();
    let c = morse_config(dir.path());
    let report = cmd_relax(&c).unwrap();
    assert!(
        (report.energy - 9.329_557e-3).abs() < 1e-5,
        "{}",
        report.energy
    );
    assert!(report.mean_r.is_none());
    assert!(dir.path().join("ground_state.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_noisemol");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[noise]\ngamma_mean = -1.0\n").unwrap();
    let out = Command::new(exe)
        .args(["run", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("noise.gamma_mean"));

    let good = dir.path().join("good.toml");
    fs::write(
        &good,
        "model = \"morse1d\"\n[ensemble]\nn_realizations = 2\n",
    )
    .unwrap();
    let out = Command::new(exe)
        .args(["ensemble", "--config"])
        .arg(&good)
        .args([
            "--final-time",
            "0.2",
            "--workers",
            "2",
            "--seed",
            "5",
            "--out",
        ])
        .arg(dir.path().join("run"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let written = fs::read_to_string(dir.path().join("run/config.toml")).unwrap();
    let parsed = SimConfig::parse(&written).unwrap();
    assert_eq!(parsed.ensemble.master_seed, 5);
    assert_eq!(parsed.ensemble.workers, 2);
    assert_eq!(parsed.noise.final_time_fs, 0.2);

    let out = Command::new(exe)
        .args(["sweep", "--axis", "mass:1", "--out"])
        .arg(dir.path().join("s"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

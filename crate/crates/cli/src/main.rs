use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noisemol_cli::{
    cmd_ensemble, cmd_relax, cmd_run, cmd_sweep, cmd_validate_noise, parse_axis, CliError,
    Overrides, SimConfig,
};

/// Shot-noise driven quantum dynamics of H₂⁺ and two 1D models.
#[derive(Parser)]
#[command(name = "noisemol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; omitted keys take their defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for ensembles (does not change results).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Run directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Final propagation time in femtoseconds.
    #[arg(long, value_name = "FS")]
    final_time: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the ground state and report its energy.
    Relax(Common),
    /// Propagate one noise realization.
    Run(Common),
    /// Average over the configured number of realizations.
    Ensemble(Common),
    /// One ensemble per value of a noise parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `spacing:v1,v2,...` (⟨Δt⟩/T_e) or `gamma:v1,v2,...`.
        #[arg(long, value_name = "AXIS")]
        axis: String,
    },
    /// Compare sampled noise statistics with their analytic values.
    ValidateNoise(Common),
}

fn load(common: &Common) -> Result<SimConfig, CliError> {
    let config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            SimConfig::parse(&text).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
                other => other,
            })?
        }
        None => SimConfig::default(),
    };
    Overrides {
        workers: common.workers,
        out_dir: common.out.clone(),
        seed: common.seed,
        final_time_fs: common.final_time,
    }
    .apply(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Relax(c) => {
            let report = cmd_relax(&load(&c)?)?;
            println!("ground energy {:.10} a.u.", report.energy);
            if let Some(r) = report.mean_r {
                println!("<R> {r:.6} a.u.");
            }
            println!("written to {}", report.dir.display());
        }
        Command::Run(c) => {
            let config = load(&c)?;
            let series = cmd_run(&config)?;
            println!(
                "{} records written to {}",
                series.len(),
                config.out_dir.display()
            );
        }
        Command::Ensemble(c) => {
            let config = load(&c)?;
            let result = cmd_ensemble(&config)?;
            println!(
                "{} realizations averaged into {}",
                result.n_realizations(),
                config.out_dir.display()
            );
        }
        Command::Sweep { common, axis } => {
            let (axis, values) = parse_axis(&axis)?;
            let config = load(&common)?;
            let rows = cmd_sweep(&config, axis, &values)?;
            for row in rows {
                let cols: Vec<String> = row
                    .finals
                    .iter()
                    .map(|(c, m, s)| format!("{c} {m:.4} ± {s:.4}"))
                    .collect();
                println!("{} = {}: {}", axis.name(), row.value, cols.join(", "));
            }
        }
        Command::ValidateNoise(c) => {
            let stats = cmd_validate_noise(&load(&c)?)?;
            print!("{}", stats.report());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("noisemol: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

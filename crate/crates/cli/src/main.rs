use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qtst_sim::{
    load_config, run_subcommand, thread_limit, CliError, Command, Overrides, THREADS_ENV,
};

/// Density-matrix simulation of teleportation-based photon-to-spin transfer.
#[derive(Debug, Parser)]
#[command(name = "qtst-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shots per tomography basis; 0 for exact probabilities.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Override a configuration key, e.g. `--set sigma_f=40`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Fidelity and herald probability against detuning.
    SweepFreq,
    /// Basis and superposition fidelity against photon delay.
    SweepTime,
    /// Electron-nuclear Bell fidelity against delay.
    EntDecay,
    /// Six-input transfer fidelities and process matrix.
    Transfer,
    /// One- and two-photon entanglement rates against distance.
    Rates,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::SweepFreq => Command::SweepFreq,
            Sub::SweepTime => Command::SweepTime,
            Sub::EntDecay => Command::EntDecay,
            Sub::Transfer => Command::Transfer,
            Sub::Rates => Command::Rates,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = thread_limit(std::env::var(THREADS_ENV).ok().as_deref())?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let overrides = Overrides {
        seed: cli.seed,
        shots: cli.shots,
        out: cli.out,
        set: cli.set,
    };
    let cfg = load_config(cli.config.as_deref(), &overrides)?;
    let report = run_subcommand(cli.command.into(), &cfg)?;
    for path in report.tables.iter().chain([&report.sidecar]) {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Usage(
                e.kind().to_string() + ": " + e.to_string().lines().next().unwrap_or(""),
            );
            eprintln!("{}", err.to_json_line());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

//! Subcommand dispatch.

use std::path::{Path, PathBuf};

use qtst_core::experiments::{
    entanglement_decay, rate_compare, sweep_arrival_time, sweep_frequency, transfer_summary,
    SweepMetadata, SweepResult,
};
use qtst_core::tomography::ChiMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{format_number, write_sidecar, write_table, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SweepFreq,
    SweepTime,
    EntDecay,
    Transfer,
    Rates,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::SweepFreq,
        Command::SweepTime,
        Command::EntDecay,
        Command::Transfer,
        Command::Rates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SweepFreq => "sweep-freq",
            Command::SweepTime => "sweep-time",
            Command::EntDecay => "ent-decay",
            Command::Transfer => "transfer",
            Command::Rates => "rates",
        }
    }

    /// Stem shared by the CSV and its sidecar.
    pub fn stem(self) -> &'static str {
        match self {
            Command::SweepFreq => "sweep_freq",
            Command::SweepTime => "sweep_time",
            Command::EntDecay => "ent_decay",
            Command::Transfer => "transfer",
            Command::Rates => "rates",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown subcommand {s:?}")))
    }
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    config: &'a RunConfig,
    run: &'a SweepMetadata,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    results: Value,
}

/// Files written by one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub tables: Vec<PathBuf>,
    pub sidecar: PathBuf,
}

struct Produced {
    tables: Vec<(String, Table)>,
    metadata: SweepMetadata,
    results: Value,
}

fn single(stem: &str, table: Table, metadata: SweepMetadata) -> Produced {
    Produced {
        tables: vec![(stem.to_string(), table)],
        metadata,
        results: Value::Null,
    }
}

/// Rows of `axis` followed by the named series, each as `value[, stddev]`.
fn sweep_table(sweep: &SweepResult, header: &[&str], columns: &[(&str, bool)]) -> Table {
    let mut table = Table::new(header);
    for (k, x) in sweep.axis.iter().enumerate() {
        let mut row = vec![*x];
        for (name, with_stddev) in columns {
            let e = sweep
                .series(name)
                .expect("series produced by the sweep")
                .values[k];
            row.push(e.value);
            if *with_stddev {
                row.push(e.stddev);
            }
        }
        table.push_numbers(&row);
    }
    table
}

fn chi_table(chi: &ChiMatrix) -> Table {
    let labels = ChiMatrix::labels();
    let mut header = vec!["operator".to_string()];
    for l in labels {
        header.push(format!("{l}_re"));
        header.push(format!("{l}_im"));
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (m, l) in labels.iter().enumerate() {
        let mut row = vec![l.to_string()];
        for n in 0..4 {
            let z = chi.get(m, n);
            row.push(format_number(z.re));
            row.push(format_number(z.im));
        }
        table.push(row);
    }
    table
}

fn produce(command: Command, cfg: &RunConfig) -> Result<Produced, CliError> {
    let sampling = cfg.sampling();
    let stem = command.stem();
    Ok(match command {
        Command::SweepFreq => {
            let sweep = sweep_frequency(&cfg.detuning_grid(), &cfg.noise(), &sampling)?;
            let table = sweep_table(
                &sweep,
                &[
                    "detuning_mhz",
                    "avg_fidelity",
                    "fidelity_stddev",
                    "herald_prob",
                ],
                &[("avg_fidelity", true), ("herald_prob", false)],
            );
            single(stem, table, sweep.metadata)
        }
        Command::SweepTime => {
            let sweep = sweep_arrival_time(&cfg.delay_grid(), &cfg.transfer_noise(), &sampling)?;
            let table = sweep_table(
                &sweep,
                &[
                    "delay_us",
                    "basis_fidelity",
                    "basis_stddev",
                    "superposition_fidelity",
                    "superposition_stddev",
                ],
                &[("basis_fidelity", true), ("superposition_fidelity", true)],
            );
            single(stem, table, sweep.metadata)
        }
        Command::EntDecay => {
            let sweep = entanglement_decay(&cfg.delay_grid(), &cfg.noise(), &sampling)?;
            let table = sweep_table(
                &sweep,
                &["delay_us", "fidelity", "fidelity_stddev"],
                &[("fidelity", true)],
            );
            single(stem, table, sweep.metadata)
        }
        Command::Transfer => {
            let summary = transfer_summary(&cfg.noise(), &sampling)?;
            let mut table = Table::new(&[
                "input",
                "fidelity",
                "fidelity_stddev",
                "herald_prob",
                "leak_prob",
            ]);
            for s in &summary.inputs {
                let mut row = vec![s.label.to_string()];
                for v in [
                    s.fidelity.value,
                    s.fidelity.stddev,
                    s.herald_prob,
                    s.leak_prob,
                ] {
                    row.push(format_number(v));
                }
                table.push(row);
            }
            let n = summary.inputs.len() as f64;
            let herald = summary.inputs.iter().map(|s| s.herald_prob).sum::<f64>() / n;
            let leak = summary.inputs.iter().map(|s| s.leak_prob).sum::<f64>() / n;
            let mut row = vec!["average".to_string()];
            for v in [summary.average.value, summary.average.stddev, herald, leak] {
                row.push(format_number(v));
            }
            table.push(row);
            Produced {
                tables: vec![
                    (stem.to_string(), table),
                    (format!("{stem}_chi"), chi_table(&summary.chi)),
                ],
                metadata: summary.metadata,
                results: json!({
                    "average_fidelity": summary.average.value,
                    "average_fidelity_stddev": summary.average.stddev,
                    "chi_min_eigenvalue": summary.chi.min_eigenvalue(),
                }),
            }
        }
        Command::Rates => {
            let cmp = rate_compare(&cfg.length_grid(), &cfg.rates())?;
            let mut table = Table::new(&[
                "length_km",
                "eta",
                "rate_one_photon_hz",
                "rate_two_photon_hz",
            ]);
            for (k, l) in cmp.sweep.axis.iter().enumerate() {
                let col = |name: &str| cmp.sweep.series(name).expect("rate series").values[k].value;
                table.push_numbers(&[
                    *l,
                    col("eta"),
                    col("rate_one_photon_hz"),
                    col("rate_two_photon_hz"),
                ]);
            }
            Produced {
                tables: vec![(stem.to_string(), table)],
                metadata: cmp.sweep.metadata,
                results: json!({
                    "crossover_eta": cmp.crossover_eta,
                    "crossover_length_km": cmp.crossover_length_km,
                }),
            }
        }
    })
}

/// Runs `command` and writes its CSVs and sidecar into `cfg.out`.
pub fn run_subcommand(command: Command, cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    let produced = produce(command, cfg)?;
    let dir = Path::new(&cfg.out);
    let io_err = |path: &Path, e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut tables = Vec::new();
    for (name, table) in &produced.tables {
        tables.push(write_table(dir, name, table).map_err(|e| io_err(dir, e))?);
    }
    let sidecar = Sidecar {
        tool: "qtst-sim",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: command.name(),
        config: cfg,
        run: &produced.metadata,
        outputs: produced
            .tables
            .iter()
            .map(|(n, _)| format!("{n}.csv"))
            .collect(),
        results: produced.results,
    };
    let sidecar = write_sidecar(dir, command.stem(), &sidecar).map_err(|e| io_err(dir, e))?;
    Ok(RunReport { tables, sidecar })
}

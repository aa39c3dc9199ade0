//! Configuration, subcommand dispatch and file output for `qtst-sim`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

pub use commands::{run_subcommand, Command, RunReport};
pub use config::{parse_config, ConfigError, RunConfig};
pub use error::CliError;

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub out: Option<String>,
    pub set: Vec<String>,
}

/// Defaults, then the file, then `--set` entries, then dedicated flags.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| ConfigError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    for entry in &overrides.set {
        cfg.set(entry)?;
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = overrides.shots {
        cfg.shots = shots;
    }
    if let Some(out) = &overrides.out {
        cfg.out = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub const THREADS_ENV: &str = "QTST_SIM_THREADS";

/// Worker count from `QTST_SIM_THREADS`; `None` or 0 means automatic.
pub fn thread_limit(value: Option<&str>) -> Result<usize, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(0),
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
    }
}

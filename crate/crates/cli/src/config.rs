//! Flat TOML run configuration.
//!
//! Every key is optional; absent keys take the experiment defaults. Unknown
//! keys are rejected with the line they appear on.

use qtst_core::experiments::{linspace, RateParams, Sampling};
use qtst_core::nv::{StrainParams, CALIBRATED_LAMBDA_SO_GHZ, MEASURED_DELTA_PERP_GHZ};
use qtst_core::protocol::{
    NoiseParams, MEASURED_HERALD_SCALE, MEASURED_PREP_FIDELITY, MEASURED_P_SPAM,
    MEASURED_SIGMA_F_MHZ, MEASURED_SIGMA_T_US,
};
use qtst_core::tomography::MIN_RESAMPLES;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed for all sampled quantities.
    pub seed: u64,
    /// Shots per tomography basis; 0 selects exact probabilities.
    pub shots: u64,
    /// Bootstrap resamples per error bar.
    pub resamples: usize,
    /// Output directory.
    pub out: String,

    pub sigma_f: f64,
    pub sigma_t: f64,
    /// Decay scale for the arrival-time sweep when it should differ from
    /// `sigma_t`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_t_transfer: Option<f64>,
    pub p_spam: f64,
    pub prep_fidelity: f64,
    pub herald_scale: f64,
    pub delta_perp: f64,
    pub lambda_so: f64,

    pub detuning_min_mhz: f64,
    pub detuning_max_mhz: f64,
    pub detuning_points: usize,
    pub delay_min_us: f64,
    pub delay_max_us: f64,
    pub delay_points: usize,
    pub length_min_km: f64,
    pub length_max_km: f64,
    pub length_points: usize,

    pub p_zpl: f64,
    pub attenuation_db_per_km: f64,
    pub repetition_rate_hz: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let rates = RateParams::default();
        Self {
            seed: 0,
            shots: 0,
            resamples: Sampling::DEFAULT_RESAMPLES,
            out: "out".into(),
            sigma_f: MEASURED_SIGMA_F_MHZ,
            sigma_t: MEASURED_SIGMA_T_US,
            sigma_t_transfer: None,
            p_spam: MEASURED_P_SPAM,
            prep_fidelity: MEASURED_PREP_FIDELITY,
            herald_scale: MEASURED_HERALD_SCALE,
            delta_perp: MEASURED_DELTA_PERP_GHZ,
            lambda_so: CALIBRATED_LAMBDA_SO_GHZ,
            detuning_min_mhz: -100.0,
            detuning_max_mhz: 100.0,
            detuning_points: 21,
            delay_min_us: 0.0,
            delay_max_us: 3.0,
            delay_points: 31,
            length_min_km: 0.0,
            length_max_km: 100.0,
            length_points: 20,
            p_zpl: rates.p_zpl,
            attenuation_db_per_km: rates.attenuation_db_per_km,
            repetition_rate_hz: rates.repetition_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{key}: {message}")]
    Invalid {
        key: String,
        line: Option<usize>,
        message: String,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Parse { line, .. } => Some(*line),
            ConfigError::Invalid { line, .. } => *line,
            ConfigError::Io { .. } => None,
        }
    }

    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        line: None,
        message: message.into(),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map_or(1, |s| line_of_offset(text, s.start)),
        message: e.message().to_string(),
    })?;
    cfg.validate().map_err(|e| match e {
        ConfigError::Invalid { key, message, .. } => ConfigError::Invalid {
            line: line_of_key(text, &key),
            key,
            message,
        },
        other => other,
    })?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let probabilities = [
            ("p_spam", self.p_spam),
            ("prep_fidelity", self.prep_fidelity),
            ("herald_scale", self.herald_scale),
        ];
        for (key, v) in probabilities {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(key, format!("{v} is outside [0, 1]")));
            }
        }
        let positive = [
            ("sigma_f", self.sigma_f),
            ("sigma_t", self.sigma_t),
            ("sigma_t_transfer", self.sigma_t_transfer.unwrap_or(1.0)),
            ("lambda_so", self.lambda_so),
            ("repetition_rate_hz", self.repetition_rate_hz),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(key, format!("{v} must be finite and > 0")));
            }
        }
        let non_negative = [
            ("delta_perp", self.delta_perp),
            ("delay_min_us", self.delay_min_us),
            ("length_min_km", self.length_min_km),
            ("attenuation_db_per_km", self.attenuation_db_per_km),
        ];
        for (key, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(key, format!("{v} must be finite and >= 0")));
            }
        }
        if !(self.p_zpl > 0.0 && self.p_zpl <= 1.0) {
            return Err(invalid(
                "p_zpl",
                format!("{} is outside (0, 1]", self.p_zpl),
            ));
        }
        let ranges = [
            (
                "detuning_max_mhz",
                self.detuning_min_mhz,
                self.detuning_max_mhz,
            ),
            ("delay_max_us", self.delay_min_us, self.delay_max_us),
            ("length_max_km", self.length_min_km, self.length_max_km),
        ];
        for (key, lo, hi) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(invalid(key, format!("{hi} is below the minimum {lo}")));
            }
        }
        for (key, n) in [
            ("detuning_points", self.detuning_points),
            ("delay_points", self.delay_points),
            ("length_points", self.length_points),
        ] {
            if n == 0 {
                return Err(invalid(key, "grid needs at least one point"));
            }
        }
        if self.shots > 0 && self.resamples < MIN_RESAMPLES {
            return Err(invalid(
                "resamples",
                format!("{} is below the minimum {MIN_RESAMPLES}", self.resamples),
            ));
        }
        Ok(())
    }

    /// Applies one `key=value` override, the value written as in the file.
    pub fn set(&mut self, entry: &str) -> Result<(), ConfigError> {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| invalid(entry.trim(), "expected key=value"))?;
        let key = key.trim();
        let mut table = toml::Table::try_from(&*self).expect("config serializes to a table");
        let value = parse_value(value.trim());
        table.insert(key.to_string(), value);
        let updated: RunConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| invalid(key, e.message().to_string()))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn noise(&self) -> NoiseParams {
        NoiseParams {
            sigma_f: self.sigma_f,
            sigma_t: self.sigma_t,
            p_spam: self.p_spam,
            prep_fidelity: self.prep_fidelity,
            herald_scale: self.herald_scale,
            strain: StrainParams {
                delta_perp: self.delta_perp,
                lambda_so: self.lambda_so,
            },
        }
    }

    /// Noise parameters for the arrival-time sweep.
    pub fn transfer_noise(&self) -> NoiseParams {
        NoiseParams {
            sigma_t: self.sigma_t_transfer.unwrap_or(self.sigma_t),
            ..self.noise()
        }
    }

    pub fn rates(&self) -> RateParams {
        RateParams {
            p_zpl: self.p_zpl,
            attenuation_db_per_km: self.attenuation_db_per_km,
            repetition_rate: self.repetition_rate_hz,
            length_km: self.length_max_km,
        }
    }

    pub fn sampling(&self) -> Sampling {
        Sampling {
            shots: self.shots,
            resamples: self.resamples,
            seed: self.seed,
        }
    }

    pub fn detuning_grid(&self) -> Vec<f64> {
        linspace(
            self.detuning_min_mhz,
            self.detuning_max_mhz,
            self.detuning_points,
        )
    }

    pub fn delay_grid(&self) -> Vec<f64> {
        linspace(self.delay_min_us, self.delay_max_us, self.delay_points)
    }

    pub fn length_grid(&self) -> Vec<f64> {
        linspace(self.length_min_km, self.length_max_km, self.length_points)
    }
}

/// TOML value from an override; bare words are taken as strings.
fn parse_value(text: &str) -> toml::Value {
    format!("v = {text}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.noise(), NoiseParams::measured());
    }

    #[test]
    fn range_error_names_key_and_line() {
        let err = parse_config("seed = 3\np_spam = 1.5\n").unwrap_err();
        assert_eq!(err.key(), Some("p_spam"));
        assert_eq!(err.line(), Some(2));
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("seed = 1\n\nbogus = 2\n").unwrap_err();
        assert_eq!(err.line(), Some(3));
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_config("seed = 1\nshots = = 4\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }));
    }

    #[test]
    fn round_trip() {
        let cfg = parse_config("seed = 9\nsigma_t_transfer = 0.91\nshots = 1000\n").unwrap();
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn overrides() {
        let mut cfg = RunConfig::default();
        cfg.set("sigma_f=40").unwrap();
        cfg.set("out = results").unwrap();
        cfg.set("sigma_t_transfer=0.91").unwrap();
        assert_eq!(cfg.sigma_f, 40.0);
        assert_eq!(cfg.out, "results");
        assert_eq!(cfg.transfer_noise().sigma_t, 0.91);
        assert_eq!(cfg.set("p_spam=2").unwrap_err().key(), Some("p_spam"));
        assert!(cfg.set("nonsense=1").is_err());
        assert!(cfg.set("novalue").is_err());
        assert_eq!(cfg.p_spam, MEASURED_P_SPAM);
    }

    #[test]
    fn sampled_runs_need_enough_resamples() {
        assert!(parse_config("shots = 100\nresamples = 10\n").is_err());
        assert!(parse_config("resamples = 10\n").is_ok());
    }
}

//! Parameter sweeps over the transfer protocol and the rate-scaling model.
//!
//! `Sampling::exact()` (zero shots) evaluates analytic probabilities and
//! ignores the seed. Finite shots simulate tomography counts and attach
//! parametric-bootstrap error bars; each grid point draws from its own
//! substream so results do not depend on evaluation order.

mod fit;
mod rates;
mod sweeps;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::NoiseParams;
use crate::rng::RNG_ALGORITHM;
use crate::tomography::QST_METHOD;

pub use fit::{fit_gaussian_decay, fit_gaussian_lineshape, DecayFit, GaussianFit};
pub use rates::{rate_compare, RateComparison, RateParams};
pub use sweeps::{
    entanglement_decay, sweep_arrival_time, sweep_frequency, transfer_summary, InputSummary,
    TransferSummary,
};

/// Revision string recorded with every result.
pub fn revision() -> String {
    match option_env!("QTST_SIM_REVISION") {
        Some(rev) => format!("qtst-core {} ({rev})", env!("CARGO_PKG_VERSION")),
        None => format!("qtst-core {}", env!("CARGO_PKG_VERSION")),
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// ±100 MHz in 21 points.
pub fn default_detuning_grid() -> Vec<f64> {
    linspace(-100.0, 100.0, 21)
}

/// 0–3 μs in 31 points.
pub fn default_delay_grid() -> Vec<f64> {
    linspace(0.0, 3.0, 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    /// Shots per tomography basis; 0 selects exact mode.
    pub shots: u64,
    pub resamples: usize,
    pub seed: u64,
}

impl Sampling {
    pub const DEFAULT_RESAMPLES: usize = 200;

    pub fn exact() -> Self {
        Self {
            shots: 0,
            resamples: Self::DEFAULT_RESAMPLES,
            seed: 0,
        }
    }

    pub fn shots(shots: u64, seed: u64) -> Self {
        Self {
            shots,
            resamples: Self::DEFAULT_RESAMPLES,
            seed,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stddev: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stddev: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<Estimate>,
}

impl Series {
    pub fn new(name: impl Into<String>, values: Vec<Estimate>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.iter().map(|e| e.value).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub noise: Option<NoiseParams>,
    pub rates: Option<RateParams>,
    pub shots: u64,
    pub resamples: usize,
    pub seed: u64,
    pub rng: String,
    pub estimator: String,
    pub revision: String,
}

impl SweepMetadata {
    pub fn exact() -> Self {
        Self::for_sampling(None, &Sampling::exact())
    }

    pub fn for_sampling(noise: Option<NoiseParams>, sampling: &Sampling) -> Self {
        let exact = sampling.is_exact();
        Self {
            noise,
            rates: None,
            shots: sampling.shots,
            resamples: if exact { 0 } else { sampling.resamples },
            seed: if exact { 0 } else { sampling.seed },
            rng: if exact {
                "none (exact mode)".into()
            } else {
                RNG_ALGORITHM.into()
            },
            estimator: if exact {
                "exact probabilities".into()
            } else {
                format!("{QST_METHOD}; parametric bootstrap")
            },
            revision: revision(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis_name: String,
    pub axis_unit: String,
    pub axis: Vec<f64>,
    pub series: Vec<Series>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    /// Fails unless every series matches the axis length.
    pub fn new(
        axis_name: &str,
        axis_unit: &str,
        axis: Vec<f64>,
        series: Vec<Series>,
        metadata: SweepMetadata,
    ) -> Result<Self> {
        for s in &series {
            if s.values.len() != axis.len() {
                return Err(Error::DimensionMismatch {
                    expected: axis.len(),
                    actual: s.values.len(),
                });
            }
        }
        Ok(Self {
            axis_name: axis_name.into(),
            axis_unit: axis_unit.into(),
            axis,
            series,
            metadata,
        })
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

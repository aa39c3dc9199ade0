use rand::Rng;

use super::{sample_counts, MeasurementRecord};
use crate::error::{Error, Result};
use crate::rng;

pub const MIN_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapEstimate {
    /// Estimator evaluated on the observed records.
    pub estimate: f64,
    /// Sample standard deviation over the resamples.
    pub stddev: f64,
}

/// Redraws a record from its own empirical outcome frequencies.
pub fn resample_record<R: Rng + ?Sized>(
    record: &MeasurementRecord,
    rng: &mut R,
) -> MeasurementRecord {
    let n = record.shots();
    if n == 0 {
        return *record;
    }
    let probs = record.counts().map(|c| c as f64 / n as f64);
    let [p, m, l] = sample_counts(probs, n, rng);
    MeasurementRecord::new(record.basis(), p, m, l)
}

/// Parametric bootstrap of `estimator` over shot noise. Resample `r` draws
/// from substream `(seed, r)`, so the result is fixed by `seed`.
pub fn bootstrap_errorbar<F>(
    records: &[MeasurementRecord],
    estimator: F,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapEstimate>
where
    F: Fn(&[MeasurementRecord]) -> Result<f64>,
{
    if resamples < MIN_RESAMPLES {
        return Err(Error::OutOfRange {
            name: "resamples",
            value: resamples as f64,
            expected: ">= 100",
        });
    }
    let estimate = estimator(records)?;
    let mut values = Vec::with_capacity(resamples);
    for r in 0..resamples {
        let mut stream = rng::substream(seed, &[r as u64]);
        let drawn: Vec<MeasurementRecord> = records
            .iter()
            .map(|rec| resample_record(rec, &mut stream))
            .collect();
        values.push(estimator(&drawn)?);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(BootstrapEstimate {
        estimate,
        stddev: var.sqrt(),
    })
}

//! Scaling of remote-entanglement rates with channel loss.
//!
//! One-photon (single-click) schemes herald with probability ∝ p_zpl·√η.
//! Two-photon schemes and QTST-based links need a photon to cross the whole
//! channel and need ZPL photons at both ends, giving ∝ p_zpl²·η. All constant
//! factors are absorbed into the repetition rate.

use serde::{Deserialize, Serialize};

use super::{Estimate, Series, SweepMetadata, SweepResult};
use crate::error::{check_range, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Zero-phonon-line emission fraction.
    pub p_zpl: f64,
    /// Fiber loss (dB/km).
    pub attenuation_db_per_km: f64,
    /// Attempt rate (Hz).
    pub repetition_rate: f64,
    /// Node separation (km).
    pub length_km: f64,
}

impl Default for RateParams {
    fn default() -> Self {
        Self {
            p_zpl: 0.03,
            attenuation_db_per_km: 0.2,
            repetition_rate: 1.0e6,
            length_km: 0.0,
        }
    }
}

impl RateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_zpl > 0.0 && self.p_zpl <= 1.0) {
            return Err(Error::OutOfRange {
                name: "p_zpl",
                value: self.p_zpl,
                expected: "within (0, 1]",
            });
        }
        check_range(
            "attenuation_db_per_km",
            self.attenuation_db_per_km,
            0.0,
            f64::MAX,
            ">= 0",
        )?;
        check_range(
            "repetition_rate",
            self.repetition_rate,
            0.0,
            f64::MAX,
            ">= 0",
        )?;
        check_range("length_km", self.length_km, 0.0, f64::MAX, ">= 0")
    }

    /// Channel transmittance `10^(−αL/10)`.
    pub fn transmittance(&self, length_km: f64) -> f64 {
        10f64.powf(-self.attenuation_db_per_km * length_km / 10.0)
    }

    pub fn rate_one_photon(&self, eta: f64) -> f64 {
        self.repetition_rate * self.p_zpl * eta.sqrt()
    }

    pub fn rate_two_photon(&self, eta: f64) -> f64 {
        self.repetition_rate * self.p_zpl * self.p_zpl * eta
    }

    /// Transmittance where both rates coincide: `√η·p = η·p²` ⇒ `η* = 1/p²`.
    ///
    /// For `p < 1` this exceeds 1, i.e. the one-photon rate is higher at every
    /// physical transmittance.
    pub fn crossover_eta(&self) -> f64 {
        1.0 / (self.p_zpl * self.p_zpl)
    }

    /// Length at which η = η*, when that point is physical (η* ≤ 1).
    pub fn crossover_length_km(&self) -> Option<f64> {
        let eta = self.crossover_eta();
        if eta > 1.0 {
            return None;
        }
        if self.attenuation_db_per_km > 0.0 {
            Some(-10.0 * eta.log10() / self.attenuation_db_per_km)
        } else {
            Some(0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateComparison {
    pub sweep: SweepResult,
    pub crossover_eta: f64,
    pub crossover_length_km: Option<f64>,
}

/// η, one-photon and two-photon/QTST rates per length.
pub fn rate_compare(lengths: &[f64], rp: &RateParams) -> Result<RateComparison> {
    rp.validate()?;
    if lengths.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &l in lengths {
        check_range("length_km", l, 0.0, f64::MAX, ">= 0")?;
    }
    let exact = |v: f64| Estimate::exact(v);
    let etas: Vec<f64> = lengths.iter().map(|&l| rp.transmittance(l)).collect();
    let series = vec![
        Series::new("eta", etas.iter().map(|&e| exact(e)).collect()),
        Series::new(
            "rate_one_photon_hz",
            etas.iter().map(|&e| exact(rp.rate_one_photon(e))).collect(),
        ),
        Series::new(
            "rate_two_photon_hz",
            etas.iter().map(|&e| exact(rp.rate_two_photon(e))).collect(),
        ),
    ];
    let metadata = SweepMetadata {
        rates: Some(*rp),
        ..SweepMetadata::exact()
    };
    Ok(RateComparison {
        sweep: SweepResult::new("length", "km", lengths.to_vec(), series, metadata)?,
        crossover_eta: rp.crossover_eta(),
        crossover_length_km: rp.crossover_length_km(),
    })
}

//! Simulated measurement statistics and tomographic reconstruction of the
//! nuclear spin qubit, plus shot-noise error bars.
//!
//! Measurements act on the {|+1⟩, |−1⟩}_N qubit with an extra leak outcome
//! for population found in |0⟩_N.

mod bootstrap;
mod qpt;
mod qst;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Complex64, DensityOperator};
use crate::rng;

pub use bootstrap::{bootstrap_errorbar, resample_record, BootstrapEstimate, MIN_RESAMPLES};
pub use qpt::{apply_chi, kraus_to_chi, qpt, ChiMatrix};
pub use qst::{
    bell_correlator_probabilities, bell_fidelity_estimate, qst, qst_from_frequencies,
    restrict_to_qubit, QstEstimate, QST_METHOD,
};

/// Pauli measurement setting on the nuclear qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        }
    }

    /// Eigenvectors (+1 outcome, −1 outcome) in the {|+1⟩, |−1⟩} basis.
    pub fn eigenvectors(self) -> [[Complex64; 2]; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| Complex64::new(x, 0.0);
        let i = |x: f64| Complex64::new(0.0, x);
        match self {
            Basis::Z => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
            Basis::X => [[r(s), r(s)], [r(s), r(-s)]],
            Basis::Y => [[r(s), i(s)], [r(s), i(-s)]],
        }
    }

    fn index(self) -> u64 {
        match self {
            Basis::X => 0,
            Basis::Y => 1,
            Basis::Z => 2,
        }
    }
}

/// Counts of the (+, −, leak) outcomes in one measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    basis: Basis,
    counts: [u64; 3],
    shots: u64,
}

impl MeasurementRecord {
    pub fn new(basis: Basis, plus: u64, minus: u64, leak: u64) -> Self {
        Self {
            basis,
            counts: [plus, minus, leak],
            shots: plus + minus + leak,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// `[plus, minus, leak]`.
    pub fn counts(&self) -> [u64; 3] {
        self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn frequencies(&self) -> BasisFrequencies {
        let n = self.shots.max(1) as f64;
        BasisFrequencies {
            basis: self.basis,
            plus: self.counts[0] as f64 / n,
            minus: self.counts[1] as f64 / n,
            leak: self.counts[2] as f64 / n,
            weight: self.shots as f64,
        }
    }
}

/// Relative outcome frequencies; `weight` is the number of shots behind
/// them and only matters when pooling the leak estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFrequencies {
    pub basis: Basis,
    pub plus: f64,
    pub minus: f64,
    pub leak: f64,
    pub weight: f64,
}

/// Born-rule probabilities `[p₊, p₋, p_leak]` for a nuclear qutrit state.
pub fn basis_probabilities(rho: &DensityOperator, basis: Basis) -> Result<[f64; 3]> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: rho.dim(),
        });
    }
    let [up, down] = basis.eigenvectors();
    let zero = Complex64::new(0.0, 0.0);
    let plus = rho
        .matrix()
        .sandwich(&[up[0], up[1], zero], &[up[0], up[1], zero])
        .re;
    let minus = rho
        .matrix()
        .sandwich(&[down[0], down[1], zero], &[down[0], down[1], zero])
        .re;
    Ok(normalize_probs([plus, minus, rho.population(2)]))
}

pub(crate) fn normalize_probs(p: [f64; 3]) -> [f64; 3] {
    let clipped = p.map(|x| x.max(0.0));
    let total: f64 = clipped.iter().sum();
    clipped.map(|x| x / total)
}

/// Infinite-shot frequencies of `rho` in `basis`.
pub fn exact_frequencies(rho: &DensityOperator, basis: Basis) -> Result<BasisFrequencies> {
    let [plus, minus, leak] = basis_probabilities(rho, basis)?;
    Ok(BasisFrequencies {
        basis,
        plus,
        minus,
        leak,
        weight: 1.0,
    })
}

/// Multinomial draw of `shots` outcomes via sequential binomials.
pub fn sample_counts<R: Rng + ?Sized>(probs: [f64; 3], shots: u64, rng: &mut R) -> [u64; 3] {
    let probs = normalize_probs(probs);
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut out = [0u64; 3];
    for k in 0..2 {
        if remaining == 0 {
            break;
        }
        let p = if mass > 0.0 {
            (probs[k] / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let n = Binomial::new(remaining, p)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        out[k] = n;
        remaining -= n;
        mass -= probs[k];
    }
    out[2] = remaining;
    out
}

/// Simulated `shots` measurements of `rho` in `basis`, reproducible from `seed`.
pub fn simulate_counts(
    rho: &DensityOperator,
    basis: Basis,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
            expected: "> 0",
        });
    }
    let probs = basis_probabilities(rho, basis)?;
    let mut r = rng::substream(seed, &[basis.index()]);
    let [p, m, l] = sample_counts(probs, shots, &mut r);
    Ok(MeasurementRecord::new(basis, p, m, l))
}

/// X, Y and Z records for one state, each basis on its own substream.
pub fn simulate_tomography(
    rho: &DensityOperator,
    shots: u64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    Basis::ALL
        .iter()
        .map(|&b| simulate_counts(rho, b, shots, seed))
        .collect()
}

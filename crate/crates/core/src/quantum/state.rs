use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that must already be normalized to within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the given amplitudes. Fails on a zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= f64::EPSILON {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let inv = norm_sqr.sqrt().recip();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`, clamped to 1 against rounding.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr().min(1.0)
    }

    pub fn kron(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { amplitudes }
    }

    /// Column vector `|ψ⟩`.
    pub fn ket(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), 1, |i, _| self.amplitudes[i])
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude is real
    /// and positive. Ties go to the lowest index.
    pub fn with_canonical_phase(mut self) -> Self {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let mag = a.norm();
            if mag > best_mag + 1e-12 {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag > 0.0 {
            let phase = self.amplitudes[best].conj() / best_mag;
            for a in &mut self.amplitudes {
                *a *= phase;
            }
            self.amplitudes[best] = Complex64::new(best_mag, 0.0);
        }
        self
    }
}

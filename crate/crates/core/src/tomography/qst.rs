use nalgebra::linalg::SymmetricEigen;

use super::{normalize_probs, Basis, BasisFrequencies, MeasurementRecord};
use crate::error::{Error, Result};
use crate::quantum::reassemble_clipped;
use crate::quantum::{
    Complex64, ComplexMatrix, DensityOperator, HilbertLayout, PureState, Subsystem,
};

/// Label stored with reconstructed states.
pub const QST_METHOD: &str = "linear-inversion + eigenvalue clipping";

/// Reconstructed nuclear qubit state, post-selected on the qubit subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct QstEstimate {
    pub rho: DensityOperator,
    /// Linear-inversion Bloch vector before the physicality projection.
    pub bloch: [f64; 3],
    /// Pooled frequency of the |0⟩_N outcome.
    pub leak: f64,
}

impl QstEstimate {
    /// `(1 − leak)·⟨ψ|ρ|ψ⟩`, i.e. the qutrit fidelity with the leak counted as
    /// failure. `psi` is a qubit state.
    pub fn fidelity(&self, psi: &PureState) -> Result<f64> {
        let f = crate::quantum::state_fidelity(&self.rho, psi)?;
        Ok((1.0 - self.leak) * f)
    }
}

pub fn qst(records: &[MeasurementRecord]) -> Result<QstEstimate> {
    let freqs: Vec<BasisFrequencies> = records.iter().map(MeasurementRecord::frequencies).collect();
    qst_from_frequencies(&freqs)
}

/// Linear inversion from Pauli expectations followed by projection onto the
/// nearest physical state (negative eigenvalues clipped, trace renormalized).
pub fn qst_from_frequencies(freqs: &[BasisFrequencies]) -> Result<QstEstimate> {
    let mut bloch = [0.0; 3];
    for (k, basis) in Basis::ALL.iter().enumerate() {
        let mut plus = 0.0;
        let mut minus = 0.0;
        let mut seen = false;
        for f in freqs.iter().filter(|f| f.basis == *basis) {
            plus += f.plus * f.weight;
            minus += f.minus * f.weight;
            seen = true;
        }
        if !seen {
            return Err(Error::MissingBasis(basis.name()));
        }
        bloch[k] = if plus + minus > 0.0 {
            (plus - minus) / (plus + minus)
        } else {
            0.0
        };
    }
    let total_weight: f64 = freqs.iter().map(|f| f.weight).sum();
    let leak = if total_weight > 0.0 {
        freqs.iter().map(|f| f.leak * f.weight).sum::<f64>() / total_weight
    } else {
        0.0
    };

    let [x, y, z] = bloch;
    let half = 0.5;
    let linear = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(half * (1.0 + z), 0.0),
            Complex64::new(half * x, -half * y),
            Complex64::new(half * x, half * y),
            Complex64::new(half * (1.0 - z), 0.0),
        ],
    )?;
    let eig = SymmetricEigen::new(linear.into_dmatrix());
    let physical = DensityOperator::new(qubit_layout(), clip_and_symmetrize(&eig)?)?;
    Ok(QstEstimate {
        rho: physical,
        bloch,
        leak,
    })
}

fn clip_and_symmetrize(eig: &SymmetricEigen<Complex64, nalgebra::Dyn>) -> Result<ComplexMatrix> {
    let m = reassemble_clipped(eig)?;
    Ok((&m + &m.adjoint()).scale(0.5))
}

fn qubit_layout() -> HilbertLayout {
    HilbertLayout::single(Subsystem::nuclear_qubit())
}

/// Splits a nuclear qutrit state into the renormalized qubit block and the
/// |0⟩_N population.
pub fn restrict_to_qubit(rho_n: &DensityOperator) -> Result<(DensityOperator, f64)> {
    match rho_n.dim() {
        2 => Ok((rho_n.clone(), 0.0)),
        3 => {
            let leak = rho_n.population(2);
            let kept = 1.0 - leak;
            if kept <= 1e-15 {
                return Err(Error::NoHerald { prob: kept });
            }
            let m = ComplexMatrix::from_fn(2, 2, |i, j| rho_n.matrix().get(i, j) / kept);
            let m = (&m + &m.adjoint()).scale(0.5);
            Ok((DensityOperator::new(qubit_layout(), m)?, leak))
        }
        d => Err(Error::DimensionMismatch {
            expected: 3,
            actual: d,
        }),
    }
}

/// Outcome probabilities `[even, odd, leak]` of the two-qubit parity
/// measurement `B ⊗ B` on an electron ⊗ nuclear state. `leak` collects
/// population with the nuclear spin in |0⟩.
pub fn bell_correlator_probabilities(rho_en: &DensityOperator, basis: Basis) -> Result<[f64; 3]> {
    if rho_en.dim() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            actual: rho_en.dim(),
        });
    }
    // Qubit-subspace indices 3·e + n with e, n ∈ {+1, −1}.
    let idx = [0usize, 1, 3, 4];
    let pauli = match basis {
        Basis::X => ComplexMatrix::pauli_x(),
        Basis::Y => ComplexMatrix::pauli_y(),
        Basis::Z => ComplexMatrix::pauli_z(),
    };
    let bb = pauli.kron(&pauli);
    let mut corr = Complex64::new(0.0, 0.0);
    let mut qubit_pop = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        qubit_pop += rho_en.population(i);
        for (b, &j) in idx.iter().enumerate() {
            corr += bb.get(a, b) * rho_en.matrix().get(j, i);
        }
    }
    let leak = rho_en.population(2) + rho_en.population(5);
    Ok(normalize_probs([
        0.5 * (qubit_pop + corr.re),
        0.5 * (qubit_pop - corr.re),
        leak,
    ]))
}

/// `(1 − leak)·(1 + ⟨XX⟩ − ⟨YY⟩ + ⟨ZZ⟩)/4` from X, Y and Z parity records.
pub fn bell_fidelity_estimate(records: &[MeasurementRecord]) -> Result<f64> {
    let mut corr = [0.0; 3];
    for (k, basis) in Basis::ALL.iter().enumerate() {
        let mut even = 0u64;
        let mut odd = 0u64;
        let mut seen = false;
        for r in records.iter().filter(|r| r.basis() == *basis) {
            even += r.counts()[0];
            odd += r.counts()[1];
            seen = true;
        }
        if !seen {
            return Err(Error::MissingBasis(basis.name()));
        }
        corr[k] = if even + odd > 0 {
            (even as f64 - odd as f64) / (even + odd) as f64
        } else {
            0.0
        };
    }
    let shots: u64 = records.iter().map(MeasurementRecord::shots).sum();
    let leaked: u64 = records.iter().map(|r| r.counts()[2]).sum();
    let leak = if shots > 0 {
        leaked as f64 / shots as f64
    } else {
        0.0
    };
    let [xx, yy, zz] = corr;
    Ok((1.0 - leak) * (1.0 + xx - yy + zz) / 4.0)
}

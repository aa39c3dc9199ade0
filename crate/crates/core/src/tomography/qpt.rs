use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};

use super::qst::restrict_to_qubit;
use crate::error::{Error, Result};
use crate::protocol::PhotonState;
use crate::quantum::{Complex64, ComplexMatrix, DensityOperator, QuantumChannel};

const PAULI_LABELS: [&str; 4] = ["I", "X", "Y", "Z"];

/// Process matrix over the (I, X, Y, Z) operator basis:
/// `E(ρ) = Σ_mn χ_mn P_m ρ P_n`, normalized to `Tr χ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    entries: ComplexMatrix,
}

impl ChiMatrix {
    /// Hermitian part of `entries`, rescaled to unit trace.
    pub fn from_entries(entries: ComplexMatrix) -> Result<Self> {
        if entries.rows() != 4 || entries.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: entries.rows(),
            });
        }
        let herm = (&entries + &entries.adjoint()).scale(0.5);
        let tr = herm.trace().re;
        if !(tr > 1e-12) {
            return Err(Error::InvalidDensity(format!(
                "chi trace {tr} is not positive"
            )));
        }
        Ok(Self {
            entries: herm.scale(1.0 / tr),
        })
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries.get(m, n)
    }

    pub fn labels() -> [&'static str; 4] {
        PAULI_LABELS
    }

    pub fn real_part(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (m, row) in out.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                *v = self.entries.get(m, n).re;
            }
        }
        out
    }

    /// Process fidelity with the identity channel.
    pub fn identity_component(&self) -> f64 {
        self.entries.get(0, 0).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.as_dmatrix().clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `Σ_mn χ_mn P_m ρ P_n` on a qubit operator.
pub fn apply_chi(chi: &ChiMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let paulis = ComplexMatrix::pauli_basis();
    let mut out = ComplexMatrix::zeros(2, 2);
    for (m, pm) in paulis.iter().enumerate() {
        let left = pm * rho;
        for (n, pn) in paulis.iter().enumerate() {
            out = &out + &(&left * pn).scale_complex(chi.get(m, n));
        }
    }
    out
}

/// Analytic χ of a qubit channel: expand each Kraus operator as
/// `K = Σ_m a_m P_m` with `a_m = Tr(P_m K)/2`, then `χ_mn = Σ_K a_m a_n*`.
pub fn kraus_to_chi(channel: &QuantumChannel) -> Result<ChiMatrix> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: channel.dim(),
        });
    }
    let paulis = ComplexMatrix::pauli_basis();
    let mut chi = ComplexMatrix::zeros(4, 4);
    for k in channel.kraus_ops() {
        let a: Vec<Complex64> = paulis.iter().map(|p| (p * k).trace() * 0.5).collect();
        for m in 0..4 {
            for n in 0..4 {
                chi.set(m, n, chi.get(m, n) + a[m] * a[n].conj());
            }
        }
    }
    ChiMatrix::from_entries(chi)
}

/// Least-squares χ from input/output pairs.
///
/// `outputs` may be nuclear qutrit states; their |0⟩_N population is removed
/// and the qubit block renormalized before fitting. The result is projected
/// onto Hermitian, unit-trace matrices.
pub fn qpt(inputs: &[PhotonState], outputs: &[DensityOperator]) -> Result<ChiMatrix> {
    if inputs.len() != outputs.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            actual: outputs.len(),
        });
    }
    if inputs.is_empty() {
        return Err(Error::RankDeficient);
    }
    let paulis = ComplexMatrix::pauli_basis();
    let rows = 4 * inputs.len();
    let mut design = DMatrix::<Complex64>::zeros(rows, 16);
    let mut target = DVector::<Complex64>::zeros(rows);
    for (k, (input, output)) in inputs.iter().zip(outputs).enumerate() {
        let rho_in = input.as_pure().projector();
        let (rho_out, _) = restrict_to_qubit(output)?;
        for (m, pm) in paulis.iter().enumerate() {
            let left = pm * &rho_in;
            for (n, pn) in paulis.iter().enumerate() {
                let term = &left * pn;
                for (e, z) in term.to_row_major().into_iter().enumerate() {
                    design[(4 * k + e, 4 * m + n)] = z;
                }
            }
        }
        for (e, z) in rho_out.matrix().to_row_major().into_iter().enumerate() {
            target[4 * k + e] = z;
        }
    }

    // Normal equations solved through the eigendecomposition of A†A.
    let gram = design.adjoint() * &design;
    let rhs = design.adjoint() * target;
    let eig = SymmetricEigen::new(gram);
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if eig.eigenvalues.iter().any(|&l| l <= 1e-10 * max) {
        return Err(Error::RankDeficient);
    }
    let v = &eig.eigenvectors;
    let coeffs = v.adjoint() * rhs;
    let scaled = DVector::from_fn(16, |i, _| coeffs[i] / eig.eigenvalues[i]);
    let x = v * scaled;
    let chi = ComplexMatrix::from_fn(4, 4, |m, n| x[4 * m + n]);
    ChiMatrix::from_entries(chi)
}

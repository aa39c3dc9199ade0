use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use super::layout::HilbertLayout;
use super::matrix::ComplexMatrix;
use super::state::PureState;
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-10;
pub const PROJECTOR_TOL: f64 = 1e-10;
pub const HERALD_THRESHOLD: f64 = 1e-15;

/// Hermitian, unit-trace, positive semidefinite operator on a labeled space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: HilbertLayout,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates all three density-operator invariants.
    pub fn new(layout: HilbertLayout, matrix: ComplexMatrix) -> Result<Self> {
        let dim = layout.dim();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let rho = Self { layout, matrix };
        let min = rho.min_eigenvalue();
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Symmetrizes away round-off asymmetry before validating.
    pub(crate) fn from_computed(layout: HilbertLayout, matrix: ComplexMatrix) -> Result<Self> {
        let sym = (&matrix + &matrix.adjoint()).scale(0.5);
        Self::new(layout, sym)
    }

    pub fn from_pure(layout: HilbertLayout, psi: &PureState) -> Result<Self> {
        if psi.dim() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                actual: psi.dim(),
            });
        }
        Self::from_computed(layout, psi.projector())
    }

    pub fn maximally_mixed(layout: HilbertLayout) -> Self {
        let d = layout.dim();
        let matrix = ComplexMatrix::identity(d).scale(1.0 / d as f64);
        Self { layout, matrix }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyGrid)?.1;
        let d = first.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (w, rho) in parts {
            if rho.layout != first.layout {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: rho.dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::OutOfRange {
                    name: "mixture weight",
                    value: *w,
                    expected: "nonnegative",
                });
            }
            acc = &acc + &rho.matrix.scale(*w);
        }
        Self::from_computed(first.layout.clone(), acc)
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Population of basis state `index`.
    pub fn population(&self, index: usize) -> f64 {
        self.matrix.get(index, index).re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.as_dmatrix().clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Sets eigenvalues within the positivity tolerance to zero and
    /// renormalizes the trace.
    pub fn clip_negative(&self) -> Result<Self> {
        let eig = SymmetricEigen::new(self.matrix.as_dmatrix().clone());
        if eig.eigenvalues.iter().any(|&l| l < POSITIVITY_TOL) {
            return Err(Error::InvalidDensity(
                "eigenvalue below positivity tolerance".into(),
            ));
        }
        Self::from_computed(self.layout.clone(), reassemble_clipped(&eig)?)
    }

    /// ρ ⊗ σ with the combined layout.
    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let layout = self.layout.tensor(&other.layout)?;
        Self::from_computed(layout, self.matrix.kron(&other.matrix))
    }

    /// Same operator on a relabeled layout of equal dimension.
    pub fn relabel(&self, layout: HilbertLayout) -> Result<Self> {
        if layout.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: layout.dim(),
            });
        }
        Ok(Self {
            layout,
            matrix: self.matrix.clone(),
        })
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let diff = (&self.matrix - &other.matrix).into_dmatrix();
        let diff = diff.clone().adjoint().scale(0.5) + diff.scale(0.5);
        let eig = SymmetricEigen::new(diff);
        Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }
}

/// Rebuilds `V diag(max(λ,0)) V†` normalized to unit trace.
pub(crate) fn reassemble_clipped(
    eig: &SymmetricEigen<Complex64, nalgebra::Dyn>,
) -> Result<ComplexMatrix> {
    let n = eig.eigenvalues.len();
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidDensity("no positive eigenvalue".into()));
    }
    let v = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * v[(j, k)].conj() * (clipped[k] / total))
            .sum()
    }))
}

/// Traces out every subsystem not listed in `keep`.
pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    let layout = rho.layout();
    let mut kept: Vec<usize> = keep
        .iter()
        .map(|l| layout.position(l))
        .collect::<Result<_>>()?;
    kept.sort_unstable();
    kept.dedup();
    let reduced_layout = layout.restrict(&kept);
    let rd = reduced_layout.dim();
    let n = layout.dim();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| layout.digits(i)).collect();
    let split = |d: &[usize]| -> (usize, Vec<usize>) {
        let kept_digits: Vec<usize> = kept.iter().map(|&k| d[k]).collect();
        let rest: Vec<usize> = (0..d.len())
            .filter(|k| !kept.contains(k))
            .map(|k| d[k])
            .collect();
        (reduced_layout.flat_index(&kept_digits), rest)
    };
    let parts: Vec<(usize, Vec<usize>)> = digits.iter().map(|d| split(d)).collect();
    let mut out = ComplexMatrix::zeros(rd, rd);
    for i in 0..n {
        for j in 0..n {
            if parts[i].1 == parts[j].1 {
                let (a, b) = (parts[i].0, parts[j].0);
                out.set(a, b, out.get(a, b) + rho.matrix().get(i, j));
            }
        }
    }
    DensityOperator::from_computed(reduced_layout, out)
}

/// Outcome of a successful projective filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub prob: f64,
    pub post: DensityOperator,
}

/// `prob = Tr(PρP)`, `post = PρP / prob`.
pub fn project(rho: &DensityOperator, p_op: &ComplexMatrix) -> Result<Projection> {
    if p_op.rows() != rho.dim() || p_op.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: p_op.rows(),
        });
    }
    let deviation = p_op.projector_error();
    if deviation > PROJECTOR_TOL {
        return Err(Error::NotAProjector { deviation });
    }
    let filtered = &(p_op * rho.matrix()) * p_op;
    let prob = filtered.trace().re;
    if prob < HERALD_THRESHOLD {
        return Err(Error::NoHerald { prob });
    }
    let post = DensityOperator::from_computed(rho.layout().clone(), filtered.scale(1.0 / prob))?;
    Ok(Projection {
        prob: prob.min(1.0),
        post,
    })
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityOperator, psi: &PureState) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: psi.dim(),
        });
    }
    let f = rho.matrix().sandwich(psi.amplitudes(), psi.amplitudes()).re;
    Ok(f.clamp(0.0, 1.0))
}

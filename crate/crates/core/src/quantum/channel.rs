use super::density::DensityOperator;
use super::layout::HilbertLayout;
use super::matrix::ComplexMatrix;
use crate::error::{check_range, Error, Result};

/// Completeness deviation above which a Kraus set is rejected.
pub const CPTP_TOL: f64 = 1e-10;

/// Trace-preserving channel in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus_ops: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops.first().ok_or(Error::NotTracePreserving {
            deviation: f64::INFINITY,
        })?;
        let d = first.rows();
        for k in &kraus_ops {
            if k.rows() != d || k.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: k.rows().max(k.cols()),
                });
            }
        }
        let ch = Self { kraus_ops };
        let deviation = ch.completeness_error();
        if deviation > CPTP_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Conjugation by a single unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].rows()
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim();
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// `Σ K M K†` on a bare matrix of the channel's dimension.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = m.rows();
        self.kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| {
                &acc + &(&(k * m) * &k.adjoint())
            })
    }
}

/// Lifts `op`, acting on the listed subsystems in the listed order, to the
/// full space of `layout` (identity elsewhere).
pub fn embed_operator(
    layout: &HilbertLayout,
    op: &ComplexMatrix,
    on: &[&str],
) -> Result<ComplexMatrix> {
    let targets: Vec<usize> = on
        .iter()
        .map(|l| layout.position(l))
        .collect::<Result<_>>()?;
    let dims = layout.dims();
    let target_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if op.rows() != target_dim || op.cols() != target_dim {
        return Err(Error::DimensionMismatch {
            expected: target_dim,
            actual: op.rows(),
        });
    }
    let n = layout.dim();
    let split: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|i| {
            let d = layout.digits(i);
            let sub = targets.iter().fold(0, |acc, &t| acc * dims[t] + d[t]);
            let rest = (0..d.len())
                .filter(|k| !targets.contains(k))
                .map(|k| d[k])
                .collect();
            (sub, rest)
        })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if split[i].1 == split[j].1 {
            op.get(split[i].0, split[j].0)
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    }))
}

/// `Σ K ρ K†` with each Kraus operator acting on the `on` subsystems.
pub fn apply_channel(
    rho: &DensityOperator,
    ch: &QuantumChannel,
    on: &[&str],
) -> Result<DensityOperator> {
    let deviation = ch.completeness_error();
    if deviation > CPTP_TOL {
        return Err(Error::NotTracePreserving { deviation });
    }
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in ch.kraus_ops() {
        let full = embed_operator(rho.layout(), k, on)?;
        out = &out + &(&(&full * rho.matrix()) * &full.adjoint());
    }
    DensityOperator::from_computed(rho.layout().clone(), out)
}

/// Phase-flip pair `{√((1+c)/2)·I, √((1−c)/2)·Z}` on one qubit.
///
/// Applied to either half of a Bell pair this scales the |Φ⁺⟩/|Φ⁻⟩ coherence
/// by `coherence`; `coherence = 0` turns |Φ⁺⟩⟨Φ⁺| into the equal Φ⁺/Φ⁻ mixture.
pub fn dephasing_channel(coherence: f64) -> Result<QuantumChannel> {
    check_range("coherence", coherence, 0.0, 1.0, "within [0, 1]")?;
    let keep = ((1.0 + coherence) / 2.0).sqrt();
    let flip = ((1.0 - coherence) / 2.0).sqrt();
    QuantumChannel::new(vec![
        ComplexMatrix::identity(2).scale(keep),
        ComplexMatrix::pauli_z().scale(flip),
    ])
}

use crate::error::{Error, Result};

pub const PHOTON: &str = "photon";
pub const ELECTRON: &str = "electron";
pub const NUCLEAR: &str = "nuclear";

/// One tensor factor of a Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    label: String,
    basis: Vec<String>,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, basis: &[&str]) -> Self {
        Self {
            label: label.into(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// Photon polarization: index 0 = |+1⟩ (right circular), 1 = |−1⟩.
    pub fn photon() -> Self {
        Self::new(PHOTON, &["+1", "-1"])
    }

    /// Electron spin restricted to m_e = ±1: index 0 = |+1⟩, 1 = |−1⟩.
    pub fn electron() -> Self {
        Self::new(ELECTRON, &["+1", "-1"])
    }

    /// Nitrogen nuclear spin: index 0 = |+1⟩, 1 = |−1⟩, 2 = |0⟩ (leakage level).
    pub fn nuclear() -> Self {
        Self::new(NUCLEAR, &["+1", "-1", "0"])
    }

    /// Nuclear spin qubit subspace {|+1⟩, |−1⟩} after post-selection.
    pub fn nuclear_qubit() -> Self {
        Self::new(NUCLEAR, &["+1", "-1"])
    }
}

/// Ordered list of subsystems; the first factor is the most significant
/// digit of the flat basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertLayout {
    subsystems: Vec<Subsystem>,
}

impl HilbertLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        for (i, s) in subsystems.iter().enumerate() {
            if s.dim() == 0 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    actual: 0,
                });
            }
            if subsystems[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::UnknownSubsystem(format!(
                    "duplicate label {}",
                    s.label
                )));
            }
        }
        Ok(Self { subsystems })
    }

    pub fn single(subsystem: Subsystem) -> Self {
        Self {
            subsystems: vec![subsystem],
        }
    }

    /// Generic unlabeled register of the given dimension.
    pub fn anonymous(dim: usize) -> Self {
        let basis: Vec<String> = (0..dim).map(|i| i.to_string()).collect();
        Self::single(Subsystem {
            label: "system".into(),
            basis,
        })
    }

    /// photon ⊗ electron ⊗ nuclear (dimension 12); index = 6·p + 3·e + n.
    pub fn photon_electron_nuclear() -> Self {
        Self {
            subsystems: vec![
                Subsystem::photon(),
                Subsystem::electron(),
                Subsystem::nuclear(),
            ],
        }
    }

    /// electron ⊗ nuclear; index = 3·e + n.
    pub fn electron_nuclear() -> Self {
        Self {
            subsystems: vec![Subsystem::electron(), Subsystem::nuclear()],
        }
    }

    /// photon ⊗ electron; index = 2·p + e.
    pub fn photon_electron() -> Self {
        Self {
            subsystems: vec![Subsystem::photon(), Subsystem::electron()],
        }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(Subsystem::dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(Subsystem::dim).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.to_string()))
    }

    /// Layout of the listed subsystems, in this layout's order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self {
            subsystems: keep.iter().map(|&k| self.subsystems[k].clone()).collect(),
        }
    }

    pub fn tensor(&self, other: &HilbertLayout) -> Result<Self> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        Self::new(subsystems)
    }

    /// Splits a flat index into per-subsystem digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (k, s) in self.subsystems.iter().enumerate().rev() {
            out[k] = index % s.dim();
            index /= s.dim();
        }
        out
    }

    /// Inverse of [`HilbertLayout::digits`].
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        self.subsystems
            .iter()
            .zip(digits)
            .fold(0, |acc, (s, d)| acc * s.dim() + d)
    }

    /// Human-readable label of a flat basis index, e.g. `|+1,-1,0⟩`.
    pub fn basis_label(&self, index: usize) -> String {
        let parts: Vec<&str> = self
            .digits(index)
            .iter()
            .zip(&self.subsystems)
            .map(|(&d, s)| s.basis[d].as_str())
            .collect();
        format!("|{}⟩", parts.join(","))
    }
}

//! The teleportation-based state-transfer pipeline.
//!
//! prepare e–N Bell pair → dephase for the photon delay → absorb the photon
//! (projection onto |A₂⟩ ⊗ I_N) → trace out photon and electron → σx
//! feed-forward on the nuclear qubit → SPAM leakage into |0⟩_N.
//!
//! Everything is computed as exact probabilities; there is no sampling here.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::nv::{bell_phi_minus_en, bell_phi_plus_en, bsm_projector, StrainParams};
use crate::quantum::{
    apply_channel, dephasing_channel, partial_trace, project, state_fidelity, Complex64,
    ComplexMatrix, DensityOperator, HilbertLayout, PureState, Subsystem, ELECTRON, NUCLEAR,
};

/// Spectral-diffusion width of the herald lineshape (MHz).
pub const MEASURED_SIGMA_F_MHZ: f64 = 61.0;
/// Gaussian dephasing scale of the e–N Bell pair (μs).
pub const MEASURED_SIGMA_T_US: f64 = 0.98;
pub const MEASURED_P_SPAM: f64 = 0.016;
pub const MEASURED_PREP_FIDELITY: f64 = 0.97;
/// Per-attempt herald probability at zero detuning.
pub const MEASURED_HERALD_SCALE: f64 = 0.1;

/// Polarization qubit α|+1⟩ + β|−1⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl PhotonState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { alpha, beta })
    }

    fn real(a: f64, b: f64) -> Self {
        Self {
            alpha: Complex64::new(a, 0.0),
            beta: Complex64::new(b, 0.0),
        }
    }

    /// Right-circular polarization.
    pub fn plus_one() -> Self {
        Self::real(1.0, 0.0)
    }

    /// Left-circular polarization.
    pub fn minus_one() -> Self {
        Self::real(0.0, 1.0)
    }

    /// Horizontal, (|+1⟩ + |−1⟩)/√2.
    pub fn plus() -> Self {
        Self::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    }

    /// Vertical, (|+1⟩ − |−1⟩)/√2.
    pub fn minus() -> Self {
        Self::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    }

    /// Diagonal, (|+1⟩ + i|−1⟩)/√2.
    pub fn plus_i() -> Self {
        Self {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(0.0, FRAC_1_SQRT_2),
        }
    }

    /// Anti-diagonal, (|+1⟩ − i|−1⟩)/√2.
    pub fn minus_i() -> Self {
        Self {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(0.0, -FRAC_1_SQRT_2),
        }
    }

    /// The six tomographic inputs, labeled `+1, -1, +, -, +i, -i`.
    pub fn six_inputs() -> [(&'static str, PhotonState); 6] {
        [
            ("+1", Self::plus_one()),
            ("-1", Self::minus_one()),
            ("+", Self::plus()),
            ("-", Self::minus()),
            ("+i", Self::plus_i()),
            ("-i", Self::minus_i()),
        ]
    }

    /// Whether this is |+1⟩ or |−1⟩ up to phase.
    pub fn is_basis_state(&self) -> bool {
        self.alpha.norm() < 1e-12 || self.beta.norm() < 1e-12
    }

    pub fn as_pure(&self) -> PureState {
        PureState::new(vec![self.alpha, self.beta]).expect("photon state is normalized")
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(HilbertLayout::single(Subsystem::photon()), &self.as_pure())
            .expect("photon state is valid")
    }

    /// The ideal transferred state α|+1⟩_N + β|−1⟩_N inside the nuclear qutrit.
    pub fn nuclear_target(&self) -> PureState {
        PureState::new(vec![self.alpha, self.beta, Complex64::new(0.0, 0.0)])
            .expect("photon state is normalized")
    }
}

/// Noise model. Frequencies in MHz, times in μs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Herald lineshape standard deviation (MHz).
    pub sigma_f: f64,
    /// Gaussian coherence decay scale (μs).
    pub sigma_t: f64,
    /// Population moved into |0⟩_N by preparation/measurement errors.
    pub p_spam: f64,
    /// ⟨Φ⁺|ρ|Φ⁺⟩ of the prepared e–N state.
    pub prep_fidelity: f64,
    /// Herald probability at zero detuning for an ideal Bell measurement (κ).
    pub herald_scale: f64,
    pub strain: StrainParams,
}

impl NoiseParams {
    /// Values matching the reported experiment.
    pub fn measured() -> Self {
        Self {
            sigma_f: MEASURED_SIGMA_F_MHZ,
            sigma_t: MEASURED_SIGMA_T_US,
            p_spam: MEASURED_P_SPAM,
            prep_fidelity: MEASURED_PREP_FIDELITY,
            herald_scale: MEASURED_HERALD_SCALE,
            strain: StrainParams::default(),
        }
    }

    /// No static errors: perfect preparation, no strain, no SPAM. Decay scales
    /// and κ keep their measured values.
    pub fn ideal() -> Self {
        Self {
            p_spam: 0.0,
            prep_fidelity: 1.0,
            strain: StrainParams::unstrained(),
            ..Self::measured()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("p_spam", self.p_spam, 0.0, 1.0, "within [0, 1]")?;
        check_range(
            "prep_fidelity",
            self.prep_fidelity,
            0.0,
            1.0,
            "within [0, 1]",
        )?;
        check_range("herald_scale", self.herald_scale, 0.0, 1.0, "within [0, 1]")?;
        for (name, v) in [("sigma_f", self.sigma_f), ("sigma_t", self.sigma_t)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    expected: "finite and > 0",
                });
            }
        }
        self.strain.validate()
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::measured()
    }
}

/// Result of one heralded transfer attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct QtstOutcome {
    pub herald_prob: f64,
    /// Nuclear qutrit state after feed-forward and SPAM.
    pub rho_nuclear: DensityOperator,
    /// Population on |0⟩_N.
    pub leak_prob: f64,
}

impl QtstOutcome {
    /// `⟨ψ|ρ_N|ψ⟩` against the ideal transferred input.
    pub fn fidelity(&self, input: &PhotonState) -> f64 {
        state_fidelity(&self.rho_nuclear, &input.nuclear_target())
            .expect("nuclear target matches the qutrit")
    }
}

fn nuclear_layout() -> HilbertLayout {
    HilbertLayout::single(Subsystem::nuclear())
}

/// `F·|Φ⁺⟩⟨Φ⁺| + (1 − F)·|Φ⁻⟩⟨Φ⁻|` on electron ⊗ nuclear.
pub fn prepare_entangled(np: &NoiseParams) -> Result<DensityOperator> {
    np.validate()?;
    let layout = HilbertLayout::electron_nuclear();
    let plus = DensityOperator::from_pure(layout.clone(), &bell_phi_plus_en())?;
    let minus = DensityOperator::from_pure(layout, &bell_phi_minus_en())?;
    let f = np.prep_fidelity;
    DensityOperator::mixture(&[(f, &plus), (1.0 - f, &minus)])
}

/// `exp(−t² / 2σ_t²)`.
pub fn coherence_factor(t: f64, sigma_t: f64) -> f64 {
    (-(t * t) / (2.0 * sigma_t * sigma_t)).exp()
}

/// Scales the Φ⁺/Φ⁻ coherence of an e–N state by `coherence_factor(t)`.
pub fn dephase_en(rho: &DensityOperator, t: f64, np: &NoiseParams) -> Result<DensityOperator> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange {
            name: "delay",
            value: t,
            expected: ">= 0",
        });
    }
    let channel = dephasing_channel(coherence_factor(t, np.sigma_t))?;
    apply_channel(rho, &channel, &[ELECTRON])
}

fn projector_for(np: &NoiseParams) -> Result<ComplexMatrix> {
    bsm_projector(&np.strain, np.strain.delta_perp == 0.0)
}

fn lineshape(detuning: f64, sigma_f: f64) -> f64 {
    (-(detuning * detuning) / (2.0 * sigma_f * sigma_f)).exp()
}

/// `κ · exp(−Δ²/2σ_f²) · 4·Tr(PρP)` for a photon ⊗ electron ⊗ nuclear state.
pub fn herald_probability(detuning: f64, joint: &DensityOperator, np: &NoiseParams) -> Result<f64> {
    let expected = HilbertLayout::photon_electron_nuclear();
    if joint.layout() != &expected {
        return Err(Error::DimensionMismatch {
            expected: expected.dim(),
            actual: joint.dim(),
        });
    }
    let p = projector_for(np)?;
    let filtered = &(&p * joint.matrix()) * &p;
    Ok(herald_from_bsm(detuning, filtered.trace().re, np))
}

fn herald_from_bsm(detuning: f64, bsm_prob: f64, np: &NoiseParams) -> f64 {
    np.herald_scale * lineshape(detuning, np.sigma_f) * 4.0 * bsm_prob
}

/// σx on {|+1⟩, |−1⟩}_N, identity on |0⟩_N.
pub fn feed_forward(rho_n: &DensityOperator) -> Result<DensityOperator> {
    if rho_n.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: rho_n.dim(),
        });
    }
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
    let out = &(&x * rho_n.matrix()) * &x;
    DensityOperator::new(rho_n.layout().clone(), out)
}

/// `(1 − p)·ρ_N + p·|0⟩⟨0|_N`.
pub fn apply_spam(rho_n: &DensityOperator, p_spam: f64) -> Result<DensityOperator> {
    check_range("p_spam", p_spam, 0.0, 1.0, "within [0, 1]")?;
    if rho_n.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: rho_n.dim(),
        });
    }
    let leak = DensityOperator::from_pure(rho_n.layout().clone(), &PureState::basis(3, 2))?;
    DensityOperator::mixture(&[(1.0 - p_spam, rho_n), (p_spam, &leak)])
}

/// Runs the full pipeline for one input photon.
pub fn run_qtst(
    input: &PhotonState,
    detuning: f64,
    delay: f64,
    np: &NoiseParams,
) -> Result<QtstOutcome> {
    np.validate()?;
    if !detuning.is_finite() {
        return Err(Error::OutOfRange {
            name: "detuning",
            value: detuning,
            expected: "finite",
        });
    }
    let spins = dephase_en(&prepare_entangled(np)?, delay, np)?;
    let joint = input.density().tensor(&spins)?;
    let bsm = project(&joint, &projector_for(np)?)?;
    let herald_prob = herald_from_bsm(detuning, bsm.prob, np);
    let nuclear = partial_trace(&bsm.post, &[NUCLEAR])?;
    let rho_nuclear = apply_spam(&feed_forward(&nuclear)?, np.p_spam)?;
    let leak_prob = rho_nuclear.population(2);
    Ok(QtstOutcome {
        herald_prob,
        rho_nuclear,
        leak_prob,
    })
}

/// Analytic post-feed-forward nuclear state for a Bell pair with residual
/// coherence `coherence`: |α|²|+1⟩⟨+1| + |β|²|−1⟩⟨−1| + c·(αβ*|+1⟩⟨−1| + h.c.).
pub fn closed_form_rho_n(input: &PhotonState, coherence: f64) -> Result<DensityOperator> {
    check_range("coherence", coherence, 0.0, 1.0, "within [0, 1]")?;
    let (a, b) = (input.alpha, input.beta);
    let z = Complex64::new(0.0, 0.0);
    let off = a * b.conj() * coherence;
    let m = ComplexMatrix::from_row_slice(
        3,
        3,
        &[
            Complex64::new(a.norm_sqr(), 0.0),
            off,
            z,
            off.conj(),
            Complex64::new(b.norm_sqr(), 0.0),
            z,
            z,
            z,
            z,
        ],
    )?;
    DensityOperator::new(nuclear_layout(), m)
}

use serde::Serialize;

use super::{Estimate, Sampling, Series, SweepMetadata, SweepResult};
use crate::error::{Error, Result};
use crate::nv::bell_phi_plus_en;
use crate::parallel::map_indexed;
use crate::protocol::{dephase_en, prepare_entangled, run_qtst, NoiseParams, PhotonState};
use crate::quantum::{state_fidelity, DensityOperator};
use crate::rng::derive_seed;
use crate::tomography::{
    bell_correlator_probabilities, bell_fidelity_estimate, bootstrap_errorbar, qpt, qst,
    restrict_to_qubit, sample_counts, simulate_tomography, Basis, ChiMatrix, MeasurementRecord,
};

// Substream tags keeping experiments apart under one user seed.
const TAG_FREQUENCY: u64 = 1;
const TAG_ARRIVAL: u64 = 2;
const TAG_DECAY: u64 = 3;
const TAG_TRANSFER: u64 = 4;
const BOOTSTRAP_BRANCH: u64 = u64::MAX;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(())
}

fn inputs_where(pred: impl Fn(&PhotonState) -> bool) -> Vec<PhotonState> {
    PhotonState::six_inputs()
        .iter()
        .map(|(_, s)| *s)
        .filter(|s| pred(s))
        .collect()
}

/// Tomography of each output followed by `(1 − leak)·F`, averaged over inputs.
fn sampled_average_fidelity(
    pairs: &[(PhotonState, DensityOperator)],
    sampling: &Sampling,
    seed: u64,
) -> Result<Estimate> {
    let mut records = Vec::with_capacity(3 * pairs.len());
    for (k, (_, rho)) in pairs.iter().enumerate() {
        records.extend(simulate_tomography(
            rho,
            sampling.shots,
            derive_seed(seed, &[k as u64]),
        )?);
    }
    let targets: Vec<PhotonState> = pairs.iter().map(|(s, _)| *s).collect();
    let estimator = |recs: &[MeasurementRecord]| -> Result<f64> {
        let mut total = 0.0;
        for (chunk, target) in recs.chunks(3).zip(&targets) {
            total += qst(chunk)?.fidelity(&target.as_pure())?;
        }
        Ok(total / targets.len() as f64)
    };
    let b = bootstrap_errorbar(
        &records,
        estimator,
        sampling.resamples,
        derive_seed(seed, &[BOOTSTRAP_BRANCH]),
    )?;
    Ok(Estimate {
        value: b.estimate,
        stddev: b.stddev,
    })
}

fn average_fidelity(
    inputs: &[PhotonState],
    detuning: f64,
    delay: f64,
    np: &NoiseParams,
    sampling: &Sampling,
    seed: u64,
) -> Result<(Estimate, f64)> {
    let mut pairs = Vec::with_capacity(inputs.len());
    let mut fid = 0.0;
    let mut herald = 0.0;
    for input in inputs {
        let out = run_qtst(input, detuning, delay, np)?;
        fid += out.fidelity(input);
        herald += out.herald_prob;
        pairs.push((*input, out.rho_nuclear));
    }
    let n = inputs.len() as f64;
    let fidelity = if sampling.is_exact() {
        Estimate::exact(fid / n)
    } else {
        sampled_average_fidelity(&pairs, sampling, seed)?
    };
    Ok((fidelity, herald / n))
}

/// Average six-input transfer fidelity and herald probability per detuning
/// (MHz), at zero delay.
pub fn sweep_frequency(grid: &[f64], np: &NoiseParams, sampling: &Sampling) -> Result<SweepResult> {
    check_grid(grid)?;
    np.validate()?;
    let inputs = inputs_where(|_| true);
    let points = map_indexed(grid.len(), |k| {
        let seed = derive_seed(sampling.seed, &[TAG_FREQUENCY, k as u64]);
        average_fidelity(&inputs, grid[k], 0.0, np, sampling, seed)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (fid, herald): (Vec<Estimate>, Vec<Estimate>) = points
        .into_iter()
        .map(|(f, h)| (f, Estimate::exact(h)))
        .unzip();
    SweepResult::new(
        "detuning",
        "MHz",
        grid.to_vec(),
        vec![
            Series::new("avg_fidelity", fid),
            Series::new("herald_prob", herald),
        ],
        SweepMetadata::for_sampling(Some(*np), sampling),
    )
}

/// Transfer fidelity against photon delay (μs), split into the basis inputs
/// |±1⟩ and the superposition inputs |±⟩, |±i⟩.
pub fn sweep_arrival_time(
    grid: &[f64],
    np: &NoiseParams,
    sampling: &Sampling,
) -> Result<SweepResult> {
    check_grid(grid)?;
    np.validate()?;
    let basis = inputs_where(PhotonState::is_basis_state);
    let superposition = inputs_where(|s| !s.is_basis_state());
    let points = map_indexed(grid.len(), |k| -> Result<(Estimate, Estimate)> {
        let seed = derive_seed(sampling.seed, &[TAG_ARRIVAL, k as u64]);
        let (b, _) = average_fidelity(&basis, 0.0, grid[k], np, sampling, derive_seed(seed, &[0]))?;
        let (s, _) = average_fidelity(
            &superposition,
            0.0,
            grid[k],
            np,
            sampling,
            derive_seed(seed, &[1]),
        )?;
        Ok((b, s))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (b, s): (Vec<Estimate>, Vec<Estimate>) = points.into_iter().unzip();
    SweepResult::new(
        "delay",
        "us",
        grid.to_vec(),
        vec![
            Series::new("basis_fidelity", b),
            Series::new("superposition_fidelity", s),
        ],
        SweepMetadata::for_sampling(Some(*np), sampling),
    )
}

/// Bell-state fidelity of the dephased electron–nuclear pair per delay (μs).
pub fn entanglement_decay(
    grid: &[f64],
    np: &NoiseParams,
    sampling: &Sampling,
) -> Result<SweepResult> {
    check_grid(grid)?;
    let prepared = prepare_entangled(np)?;
    let points = map_indexed(grid.len(), |k| -> Result<Estimate> {
        let rho = dephase_en(&prepared, grid[k], np)?;
        if sampling.is_exact() {
            return Ok(Estimate::exact(state_fidelity(&rho, &bell_phi_plus_en())?));
        }
        let seed = derive_seed(sampling.seed, &[TAG_DECAY, k as u64]);
        let records = Basis::ALL
            .iter()
            .enumerate()
            .map(|(b, &basis)| {
                let probs = bell_correlator_probabilities(&rho, basis)?;
                let mut stream = crate::rng::substream(seed, &[b as u64]);
                let [e, o, l] = sample_counts(probs, sampling.shots, &mut stream);
                Ok(MeasurementRecord::new(basis, e, o, l))
            })
            .collect::<Result<Vec<_>>>()?;
        let est = bootstrap_errorbar(
            &records,
            bell_fidelity_estimate,
            sampling.resamples,
            derive_seed(seed, &[BOOTSTRAP_BRANCH]),
        )?;
        Ok(Estimate {
            value: est.estimate,
            stddev: est.stddev,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    SweepResult::new(
        "delay",
        "us",
        grid.to_vec(),
        vec![Series::new("fidelity", points)],
        SweepMetadata::for_sampling(Some(*np), sampling),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    pub label: &'static str,
    pub fidelity: Estimate,
    pub herald_prob: f64,
    pub leak_prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferSummary {
    pub inputs: Vec<InputSummary>,
    pub average: Estimate,
    pub chi: ChiMatrix,
    pub metadata: SweepMetadata,
}

/// Six-input transfer at zero detuning and delay, with the reconstructed
/// process matrix.
pub fn transfer_summary(np: &NoiseParams, sampling: &Sampling) -> Result<TransferSummary> {
    np.validate()?;
    let six = PhotonState::six_inputs();
    let mut summaries = Vec::with_capacity(6);
    let mut pairs = Vec::with_capacity(6);
    let mut qpt_outputs = Vec::with_capacity(6);
    // Per-input records use the same substreams as the pooled average below.
    let transfer_seed = derive_seed(sampling.seed, &[TAG_TRANSFER]);
    for (k, (label, input)) in six.iter().enumerate() {
        let out = run_qtst(input, 0.0, 0.0, np)?;
        let fidelity = if sampling.is_exact() {
            qpt_outputs.push(restrict_to_qubit(&out.rho_nuclear)?.0);
            Estimate::exact(out.fidelity(input))
        } else {
            let records_seed = derive_seed(transfer_seed, &[k as u64]);
            let records = simulate_tomography(&out.rho_nuclear, sampling.shots, records_seed)?;
            qpt_outputs.push(qst(&records)?.rho);
            let b = bootstrap_errorbar(
                &records,
                |recs: &[MeasurementRecord]| qst(recs)?.fidelity(&input.as_pure()),
                sampling.resamples,
                derive_seed(records_seed, &[BOOTSTRAP_BRANCH]),
            )?;
            Estimate {
                value: b.estimate,
                stddev: b.stddev,
            }
        };
        summaries.push(InputSummary {
            label,
            fidelity,
            herald_prob: out.herald_prob,
            leak_prob: out.leak_prob,
        });
        pairs.push((*input, out.rho_nuclear));
    }
    let average = if sampling.is_exact() {
        Estimate::exact(summaries.iter().map(|s| s.fidelity.value).sum::<f64>() / 6.0)
    } else {
        sampled_average_fidelity(&pairs, sampling, transfer_seed)?
    };
    let inputs: Vec<PhotonState> = six.iter().map(|(_, s)| *s).collect();
    let chi = qpt(&inputs, &qpt_outputs)?;
    Ok(TransferSummary {
        inputs: summaries,
        average,
        chi,
        metadata: SweepMetadata::for_sampling(Some(*np), sampling),
    })
}

//! Sweep-level behaviour in exact and finite-shot modes.

use qtst_core::experiments::{
    default_delay_grid, default_detuning_grid, entanglement_decay, fit_gaussian_decay,
    fit_gaussian_lineshape, sweep_arrival_time, sweep_frequency, transfer_summary, Sampling,
};
use qtst_core::protocol::{coherence_factor, NoiseParams};

#[test]
fn sampled_sweeps_are_seed_deterministic() {
    let np = NoiseParams::measured();
    let grid = [-40.0, 0.0, 40.0];
    let s = Sampling::shots(2_000, 42);
    let a = sweep_frequency(&grid, &np, &s).unwrap();
    let b = sweep_frequency(&grid, &np, &s).unwrap();
    assert_eq!(a, b);
    let c = sweep_frequency(&grid, &np, &Sampling::shots(2_000, 43)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn different_seeds_agree_within_error_bars() {
    let np = NoiseParams::measured();
    let grid = [0.0, 0.5, 1.5];
    let a = sweep_arrival_time(&grid, &np, &Sampling::shots(5_000, 1)).unwrap();
    let b = sweep_arrival_time(&grid, &np, &Sampling::shots(5_000, 2)).unwrap();
    for name in ["basis_fidelity", "superposition_fidelity"] {
        let (sa, sb) = (a.series(name).unwrap(), b.series(name).unwrap());
        for (x, y) in sa.values.iter().zip(&sb.values) {
            let sigma = x.stddev.hypot(y.stddev);
            assert!(sigma > 0.0);
            assert!((x.value - y.value).abs() <= 5.0 * sigma);
        }
    }
}

#[test]
fn sampled_mode_tracks_exact_mode() {
    let np = NoiseParams::measured();
    let grid = [0.0, 0.98];
    let exact = sweep_arrival_time(&grid, &np, &Sampling::exact()).unwrap();
    let sampled = sweep_arrival_time(&grid, &np, &Sampling::shots(20_000, 5)).unwrap();
    for name in ["basis_fidelity", "superposition_fidelity"] {
        let e = exact.series(name).unwrap();
        let s = sampled.series(name).unwrap();
        for (x, y) in e.values.iter().zip(&s.values) {
            assert_eq!(x.stddev, 0.0);
            assert!((x.value - y.value).abs() <= 5.0 * y.stddev.max(1e-4));
        }
    }
}

#[test]
fn frequency_sweep_is_flat_while_herald_is_gaussian() {
    let np = NoiseParams::measured();
    let grid = default_detuning_grid();
    let sweep = sweep_frequency(&grid, &np, &Sampling::exact()).unwrap();
    let fid = sweep.series("avg_fidelity").unwrap().values();
    let herald = sweep.series("herald_prob").unwrap().values();
    let spread =
        fid.iter().cloned().fold(f64::MIN, f64::max) - fid.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-12);
    let fit = fit_gaussian_lineshape(&grid, &herald).unwrap();
    assert!((fit.sigma - np.sigma_f).abs() < 1e-3 * np.sigma_f);
    assert!((fit.amplitude - np.herald_scale).abs() < 1e-6);
}

#[test]
fn arrival_sweep_separates_basis_and_superposition_inputs() {
    let np = NoiseParams::measured();
    let grid = default_delay_grid();
    let sweep = sweep_arrival_time(&grid, &np, &Sampling::exact()).unwrap();
    let basis = sweep.series("basis_fidelity").unwrap().values();
    let sup = sweep.series("superposition_fidelity").unwrap().values();
    for (b, s) in basis.iter().zip(&sup) {
        assert!(b + 1e-12 >= *s);
        assert!((b - basis[0]).abs() < 1e-12);
    }
    for w in sup.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    let fit = fit_gaussian_decay(&grid, &sup).unwrap();
    assert!((fit.sigma - np.sigma_t).abs() < 0.01 * np.sigma_t);
}

#[test]
fn entanglement_decay_follows_coherence() {
    let np = NoiseParams::measured();
    let grid = default_delay_grid();
    let sweep = entanglement_decay(&grid, &np, &Sampling::exact()).unwrap();
    let f0 = np.prep_fidelity;
    for (t, f) in grid.iter().zip(sweep.series("fidelity").unwrap().values()) {
        let want = 0.5 + (f0 - 0.5) * coherence_factor(*t, np.sigma_t);
        assert!((f - want).abs() < 1e-12);
    }
    let sampled = entanglement_decay(&[0.0, 1.0], &np, &Sampling::shots(50_000, 3)).unwrap();
    for (t, e) in [0.0, 1.0]
        .iter()
        .zip(&sampled.series("fidelity").unwrap().values)
    {
        let want = 0.5 + (f0 - 0.5) * coherence_factor(*t, np.sigma_t);
        assert!(e.stddev > 0.0);
        assert!((e.value - want).abs() <= 5.0 * e.stddev);
    }
}

#[test]
fn ideal_transfer_is_the_identity_process() {
    let summary = transfer_summary(&NoiseParams::ideal(), &Sampling::exact()).unwrap();
    assert_eq!(summary.inputs.len(), 6);
    for s in &summary.inputs {
        assert!((s.fidelity.value - 1.0).abs() < 1e-12, "{}", s.label);
        assert!((s.herald_prob - 0.1).abs() < 1e-12);
        assert_eq!(s.leak_prob, 0.0);
    }
    assert!((summary.average.value - 1.0).abs() < 1e-12);
    assert!((summary.chi.identity_component() - 1.0).abs() < 1e-10);
}

#[test]
fn sampled_transfer_reports_error_bars() {
    let np = NoiseParams::measured();
    let exact = transfer_summary(&np, &Sampling::exact()).unwrap();
    let sampled = transfer_summary(&np, &Sampling::shots(20_000, 8)).unwrap();
    assert!(sampled.average.stddev > 0.0);
    assert!((sampled.average.value - exact.average.value).abs() <= 5.0 * sampled.average.stddev);
    for (e, s) in exact.inputs.iter().zip(&sampled.inputs) {
        assert_eq!(e.label, s.label);
        assert!((e.fidelity.value - s.fidelity.value).abs() <= 5.0 * s.fidelity.stddev);
    }
    assert!((sampled.chi.identity_component() - exact.chi.identity_component()).abs() < 0.03);
}

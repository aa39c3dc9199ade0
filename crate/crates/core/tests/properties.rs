//! Randomized invariants of the density-operator core.

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qtst_core::quantum::{
    apply_channel, dephasing_channel, partial_trace, project, Complex64, ComplexMatrix,
    DensityOperator, HilbertLayout, PureState, QuantumChannel,
};

fn density_from(layout: HilbertLayout, raw: &[f64]) -> DensityOperator {
    let d = layout.dim();
    let g = ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(raw[2 * (i * d + j)], raw[2 * (i * d + j) + 1])
    });
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    let m = m.scale(1.0 / t);
    let h = ComplexMatrix::from_fn(d, d, |i, j| 0.5 * (m.get(i, j) + m.get(j, i).conj()));
    DensityOperator::new(layout, h).unwrap()
}

fn pure_from(raw: &[f64]) -> PureState {
    let amps: Vec<Complex64> = raw.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    PureState::normalized(amps).unwrap()
}

fn joint_raw() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, 2 * 144)
}

fn assert_valid(rho: &DensityOperator) {
    assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
    assert!(rho.matrix().hermiticity_error() <= 1e-12);
    assert!(rho.min_eigenvalue() >= -1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dephasing_preserves_validity(raw in joint_raw(), coherence in 0.0f64..=1.0) {
        let rho = density_from(HilbertLayout::photon_electron_nuclear(), &raw);
        let ch = dephasing_channel(coherence).unwrap();
        let out = apply_channel(&rho, &ch, &["electron"]).unwrap();
        assert_valid(&out);
    }

    #[test]
    fn random_unitary_preserves_spectrum(raw in proptest::collection::vec(-1.0f64..1.0, 8), state in joint_raw()) {
        // exp(-iθ n·σ) on the photon.
        let n = [raw[0], raw[1], raw[2]];
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt().max(1e-9);
        let theta = raw[3] * std::f64::consts::PI;
        let [_, x, y, z] = ComplexMatrix::pauli_basis();
        let gen = &(&x.scale(n[0] / norm) + &y.scale(n[1] / norm)) + &z.scale(n[2] / norm);
        let u = &ComplexMatrix::identity(2).scale(theta.cos())
            + &gen.scale_complex(Complex64::new(0.0, -theta.sin()));
        let rho = density_from(HilbertLayout::photon_electron_nuclear(), &state);
        let out = apply_channel(&rho, &QuantumChannel::unitary(u).unwrap(), &["photon"]).unwrap();
        assert_valid(&out);
        let (a, b) = (rho.eigenvalues(), out.eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_is_idempotent(raw in joint_raw(), psi in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let rho = density_from(HilbertLayout::photon_electron_nuclear(), &raw);
        let pe = pure_from(&psi).projector();
        let p_op = pe.kron(&ComplexMatrix::identity(3));
        let once = project(&rho, &p_op).unwrap();
        assert_valid(&once.post);
        let twice = project(&once.post, &p_op).unwrap();
        prop_assert!((twice.prob - 1.0).abs() < 1e-10);
        prop_assert!(twice.post.matrix().max_abs_diff(once.post.matrix()) < 1e-10);
    }

    #[test]
    fn partial_trace_is_linear_in_mixtures(a in joint_raw(), b in joint_raw(), w in 0.0f64..=1.0) {
        let layout = HilbertLayout::photon_electron_nuclear();
        let ra = density_from(layout.clone(), &a);
        let rb = density_from(layout, &b);
        let mixed = DensityOperator::mixture(&[(w, &ra), (1.0 - w, &rb)]).unwrap();
        for keep in [&["nuclear"][..], &["photon", "nuclear"][..], &["electron"][..]] {
            let lhs = partial_trace(&mixed, keep).unwrap();
            let pa = partial_trace(&ra, keep).unwrap();
            let pb = partial_trace(&rb, keep).unwrap();
            let rhs = DensityOperator::mixture(&[(w, &pa), (1.0 - w, &pb)]).unwrap();
            assert_valid(&lhs);
            prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(a in proptest::collection::vec(-1.0f64..1.0, 8), b in proptest::collection::vec(-1.0f64..1.0, 72)) {
        let qubit = density_from(HilbertLayout::photon_electron().restrict(&[0]), &a);
        let en = density_from(HilbertLayout::electron_nuclear(), &b);
        let joint = qubit.tensor(&en).unwrap();
        let back = partial_trace(&joint, &["electron", "nuclear"]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(en.matrix()) < 1e-12);
    }
}

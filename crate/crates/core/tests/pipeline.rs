use ghzsim::dynamics::{propagate, DensityMatrix, EvolutionMethod};
use ghzsim::mebuilder::{jump_operators, secular_tolerance};
use ghzsim::model::{
    build_coupling_hamiltonian, ghz_condition_ratio, pauli_op, Axis, CouplingMode, ProtocolParams,
};
use ghzsim::numkernel::{eig_hermitian, frobenius_distance};
use ghzsim::protocol::{run_protocol, stage_liouvillians, ProtocolOptions};
use ghzsim::{CMatrix, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn open(omega: f64, rate: f64) -> ProtocolParams {
    ProtocolParams::new(omega, 0.1, rate, rate).unwrap()
}

#[test]
fn stronger_bath_lowers_fidelity() {
    for w in [1.0, 4.0, 8.5, 13.0, 20.0] {
        let weak = run_protocol(&open(w, 1e-3), &Default::default()).unwrap();
        let strong = run_protocol(&open(w, 1e-2), &Default::default()).unwrap();
        assert!(
            strong.metrics.f_protocol < weak.metrics.f_protocol,
            "omega/g = {w}: {} vs {}",
            strong.metrics.f_protocol,
            weak.metrics.f_protocol
        );
    }
}

#[test]
fn caption_phase_never_beats_optimal() {
    for w in [2.0, 3.2785, 6.0, 9.8354, 17.0] {
        let m = run_protocol(&open(w, 1e-3), &Default::default()).unwrap().metrics;
        assert!(m.f_ghz <= m.f_ghz_optimal + 1e-9);
        for f in [m.f_protocol, m.f_ghz, m.f_ghz_optimal] {
            assert!((0.0..=1.0 + 1e-9).contains(&f));
        }
    }
}

#[test]
fn literal_coupling_mode_runs_and_differs() {
    let p = ProtocolParams::from_detuning_ratio(ghz_condition_ratio(1).unwrap(), 0.1, 0.0, 0.0)
        .unwrap();
    let spectral = run_protocol(&p, &Default::default()).unwrap();
    let literal = run_protocol(
        &p,
        &ProtocolOptions {
            coupling: CouplingMode::Literal,
            ..Default::default()
        },
    )
    .unwrap();
    assert!((spectral.metrics.f_ghz_optimal - 1.0).abs() < 1e-6);
    let d = frobenius_distance(&spectral.final_state().matrix, &literal.final_state().matrix)
        .unwrap();
    assert!(d > 1e-3);
    assert!(literal.metrics.leakage < 1e-9);
}

#[test]
fn jump_completeness_on_stage2() {
    let p = open(6.3, 0.0);
    let h = build_coupling_hamiltonian(&p, CouplingMode::Spectral);
    let eig = eig_hermitian(&h, 1e-12).unwrap();
    let tol = secular_tolerance(&eig.eigenvalues);
    for j in 1..=3 {
        let x = pauli_op(j, Axis::X).unwrap();
        let mut sum = CMatrix::zeros(8);
        for (w, a) in jump_operators(&h, &x, tol).unwrap() {
            sum += &a;
            if w > 0.0 {
                sum += &a.adjoint();
            }
        }
        assert!(frobenius_distance(&sum, &x).unwrap() < 1e-12);
    }
}

fn random_state(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(8, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let r = &g * &g.adjoint();
    let tr = r.trace().re;
    DensityMatrix::new(r.scale_real(1.0 / tr)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stage_maps_keep_states_valid(seed in any::<u64>(), w in 0.5f64..20.0, stage in 0usize..3, t in 0.0f64..5.0) {
        let ls = stage_liouvillians(&open(w, 1e-2), CouplingMode::Spectral).unwrap();
        let rho = random_state(seed);
        let out = propagate(&rho, &ls[stage], t, EvolutionMethod::SuperopExpm).unwrap();
        let d = out.check().unwrap();
        prop_assert!(d.trace_err <= 1e-9);
        prop_assert!(d.hermitian_err <= 1e-9);
        prop_assert!(d.min_eigenvalue >= -1e-8);
        prop_assert!(ls[stage].trace_defect() <= 1e-10);
    }
}

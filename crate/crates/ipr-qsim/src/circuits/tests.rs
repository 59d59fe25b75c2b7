use std::f64::consts::PI;

use super::*;
use crate::ed::{eigendecompose, ipr_direct, ipr_in_eigenbasis, min_gap};
use crate::hamiltonians::{build_pxp, HamiltonianSpec, HamiltonianTerm, LocalOperator};
use crate::random::{random_hermitian, random_state};
use crate::statevector::QuditState;

fn ghz(l: usize) -> QuditState {
    let mut st = QuditState::basis_state(SiteRegister::qubits(l), &vec![0; l]).unwrap();
    st.apply_gate(&GateOp::hadamard(0)).unwrap();
    for k in 1..l {
        st.apply_gate(&GateOp::cnot(k - 1, k).unwrap()).unwrap();
    }
    st
}

#[test]
fn comp_basis_census_q2_qubits() {
    // q = 2 on n qubits: n copy gates, 2 Hadamards, 1 controlled cycle.
    let psi = random_state(SiteRegister::qubits(3), 1).unwrap();
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    let gates = cb.plan().gates();
    let mut hadamards = 0;
    let mut copies = 0;
    let mut cycles = 0;
    let h_matrix = GateOp::hadamard(0).unitary().clone();
    for g in gates {
        match g {
            PlanGate::Dense(op) => {
                if op.dim() == 2 && (op.unitary() - &h_matrix).iter().all(|v| v.norm() < 1e-15) {
                    hadamards += 1;
                } else if op.targets().len() == 2 {
                    copies += 1;
                } else {
                    panic!("unexpected gate in plan");
                }
            }
            PlanGate::BlockCycle { .. } => cycles += 1,
        }
    }
    assert_eq!(hadamards, 2);
    assert_eq!(copies, 3);
    assert_eq!(cycles, 1);
    assert_eq!(cb.plan().readout_sites(), &[0]);
    assert_eq!(cb.plan().readout_target(), &[0]);
}

#[test]
fn comp_basis_census_q3_qutrits() {
    // q = 3, d = 3, n = 2 sites: 4 SUM gates, 2 Hadamards, 1 cycle.
    let psi = random_state(SiteRegister::qudits(2, 3).unwrap(), 2).unwrap();
    let cb = build_comp_basis_circuit(&psi, 3, None).unwrap();
    let mut sums = 0;
    let mut hadamards = 0;
    let mut cycles = 0;
    for g in cb.plan().gates() {
        match g {
            PlanGate::Dense(op) => {
                if op.dim() == 2 {
                    hadamards += 1;
                } else {
                    assert_eq!(op.dim(), 9);
                    sums += 1;
                }
            }
            PlanGate::BlockCycle { blocks, .. } => {
                cycles += 1;
                assert_eq!(blocks.len(), 3);
            }
        }
    }
    assert_eq!(sums, 4);
    assert_eq!(hadamards, 2);
    assert_eq!(cycles, 1);
}

#[test]
fn comp_basis_rejects_mixed_dims_and_small_q() {
    let psi = random_state(SiteRegister::new(vec![2, 3]).unwrap(), 3).unwrap();
    assert!(matches!(
        build_comp_basis_circuit(&psi, 2, None).unwrap_err(),
        crate::Error::UnsupportedRegister(_)
    ));
    let psi = random_state(SiteRegister::qubits(2), 4).unwrap();
    assert!(build_comp_basis_circuit(&psi, 1, None).is_err());
}

#[test]
fn comp_basis_exact_basis_state_gives_one() {
    for q in 2..=4 {
        let psi = QuditState::basis_state(SiteRegister::qubits(2), &[1, 0]).unwrap();
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, q, None).unwrap()).unwrap();
        assert!((est.point_value - 1.0).abs() < 1e-12, "q={q}");
    }
}

#[test]
fn comp_basis_exact_ghz_closed_form() {
    let psi = ghz(4);
    let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, 3, None).unwrap()).unwrap();
    assert!((est.point_value - 0.25).abs() < 1e-12);
}

#[test]
fn comp_basis_exact_matches_direct_moment() {
    // Estimator equals the direct moment over random states, all routes.
    for trial in 0..30u64 {
        let n = 2 + (trial as usize) % 3;
        let q = 2 + (trial as usize) % 3;
        let psi = random_state(SiteRegister::qubits(n), 100 + trial).unwrap();
        let cb = build_comp_basis_circuit(&psi, q, None).unwrap();
        let est = run_comp_basis_exact(&cb).unwrap();
        let direct = ipr_direct(psi.amplitudes(), q).unwrap().value;
        assert!(
            (est.point_value - direct).abs() <= 1e-10,
            "n={n} q={q}: {} vs {direct}",
            est.point_value
        );
    }
}

#[test]
fn comp_basis_qutrit_matches_direct_moment() {
    for trial in 0..10u64 {
        let psi = random_state(SiteRegister::qudits(2, 3).unwrap(), 200 + trial).unwrap();
        let q = 2 + (trial as usize) % 2;
        let cb = build_comp_basis_circuit(&psi, q, None).unwrap();
        let est = run_comp_basis_exact(&cb).unwrap();
        let direct = ipr_direct(psi.amplitudes(), q).unwrap().value;
        assert!((est.point_value - direct).abs() <= 1e-10);
    }
}

#[test]
fn comp_basis_sparse_equals_dense_execution() {
    let psi = random_state(SiteRegister::qubits(2), 42).unwrap();
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    let mut sparse = cb.initial_sparse().unwrap();
    cb.plan().execute_sparse(&mut sparse).unwrap();
    let mut dense = cb.initial_dense().unwrap();
    cb.plan().execute_dense(&mut dense).unwrap();
    let p_sparse = sparse.outcome_probability(&[0], &[0]).unwrap();
    let p_dense = dense.outcome_probability(&[0], &[0]).unwrap();
    assert!((p_sparse - p_dense).abs() < 1e-13);
}

#[test]
fn comp_basis_rotation_makes_rotated_basis_state_localized() {
    // |0>_x^(x)L under the X-basis rotation has I = 1; and the rotation is
    // involutive.
    let l = 3;
    let mut psi = QuditState::basis_state(SiteRegister::qubits(l), &vec![0; l]).unwrap();
    for k in 0..l {
        psi.apply_gate(&GateOp::hadamard(k)).unwrap();
    }
    let rot = basis_rotation_x(l);
    let cb = build_comp_basis_circuit(&psi, 2, Some(&rot)).unwrap();
    let est = run_comp_basis_exact(&cb).unwrap();
    assert!((est.point_value - 1.0).abs() < 1e-12);
    assert_eq!(est.basis_label, "pauli-x");

    let mut twice = psi.clone();
    for k in 0..l {
        twice.apply_gate(&GateOp::hadamard(k)).unwrap();
        twice.apply_gate(&GateOp::hadamard(k)).unwrap();
    }
    for (a, b) in twice.amplitudes().iter().zip(psi.amplitudes()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn comp_basis_cycle_applied_q_times_gives_p0_one() {
    // Replacing the single controlled cycle with q of them turns the
    // controlled branch into the identity, so the interference returns 1.
    let psi = random_state(SiteRegister::qubits(2), 77).unwrap();
    let q = 3;
    let cb = build_comp_basis_circuit(&psi, q, None).unwrap();
    let mut state = cb.initial_sparse().unwrap();
    for gate in cb.plan().gates() {
        match gate {
            PlanGate::Dense(op) => state.apply_gate(op).unwrap(),
            PlanGate::BlockCycle { control, blocks } => {
                for _ in 0..q {
                    state.apply_block_cycle(*control, blocks).unwrap();
                }
            }
        }
    }
    let p0 = state.outcome_probability(&[0], &[0]).unwrap();
    assert!((p0 - 1.0).abs() < 1e-12);
}

#[test]
fn comp_basis_sampled_deterministic_and_unbiased() {
    let psi = QuditState::basis_state(SiteRegister::qubits(2), &[0, 1]).unwrap();
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    // P0 = 1 exactly: every shot lands on 0.
    let est = run_comp_basis_sampled(&cb, 5000, 9).unwrap();
    assert_eq!(est.point_value, 1.0);
    assert_eq!(est.n_shots, Some(5000));

    let psi = ghz(4);
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    let est = run_comp_basis_sampled(&cb, 100_000, 123).unwrap();
    assert!((est.point_value - 0.5).abs() <= 4.0 * est.std_error.max(1e-4));
    let again = run_comp_basis_sampled(&cb, 100_000, 123).unwrap();
    assert_eq!(est.point_value, again.point_value);
}

#[test]
fn shot_noise_scales_inverse_sqrt() {
    // Log-log slope of the mean absolute error across a shots sweep.
    let psi = ghz(3);
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    let exact = run_comp_basis_exact(&cb).unwrap().point_value;
    let shot_counts = [100u64, 1000, 10_000, 100_000];
    let mut log_err = Vec::new();
    for (i, &shots) in shot_counts.iter().enumerate() {
        let mut err_acc = 0.0;
        let reps = 40;
        for r in 0..reps {
            let est = run_comp_basis_sampled(&cb, shots, (1000 * i + r) as u64).unwrap();
            err_acc += (est.point_value - exact).abs();
        }
        log_err.push((err_acc / reps as f64).ln());
    }
    // Fit slope against ln(shots); expect -1/2 within a factor ~3 band.
    let xs: Vec<f64> = shot_counts.iter().map(|&s| (s as f64).ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = log_err.iter().sum::<f64>() / log_err.len() as f64;
    let slope: f64 = xs
        .iter()
        .zip(&log_err)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xbar).powi(2)).sum::<f64>();
    assert!(
        (-1.5..=-0.17).contains(&slope),
        "scaling slope {slope} not compatible with -1/2"
    );
}

#[test]
fn required_shots_formula() {
    assert_eq!(required_shots(2, 0.1).unwrap(), 200);
    assert_eq!(required_shots(4, 0.1).unwrap(), 400);
    assert_eq!(
        required_shots(4, 0.1).unwrap(),
        2 * required_shots(2, 0.1).unwrap()
    );
    assert_eq!(
        required_shots(2, 0.05).unwrap(),
        4 * required_shots(2, 0.1).unwrap()
    );
    assert!(required_shots(2, 0.0).is_err());
}

fn single_qubit_z_spec() -> HamiltonianSpec {
    HamiltonianSpec::new(
        SiteRegister::qubits(1),
        vec![HamiltonianTerm::new(1.0, vec![LocalOperator::pauli_z(0)]).unwrap()],
        "z",
    )
    .unwrap()
}

#[test]
fn eigenbasis_closed_form_two_level() {
    // H = Z, psi = |+>: I_2 = 1/2 and
    // eps_r = (1/4^m) * 2 * (1/4) * (1 - cos(2^m * 2t)) / (1 - cos(2t)).
    let spec = single_qubit_z_spec();
    let plus = {
        let mut st = QuditState::basis_state(SiteRegister::qubits(1), &[0]).unwrap();
        st.apply_gate(&GateOp::hadamard(0)).unwrap();
        st
    };
    for m in 1..=3usize {
        for &t in &[0.3f64, 0.9, PI / 2.0] {
            let eb = build_eigenbasis_circuit(&plus, &spec, t, m, EvolutionMode::Exact).unwrap();
            let est = run_eigenbasis_circuit(&eb, None).unwrap();
            let pow = 4f64.powi(m as i32);
            let num = 1.0 - (2f64.powi(m as i32) * 2.0 * t).cos();
            let den = 1.0 - (2.0 * t).cos();
            let expect = 0.5 + num / (2.0 * pow * den);
            assert!(
                (est.point_value - expect).abs() < 1e-10,
                "m={m} t={t}: {} vs {expect}",
                est.point_value
            );
        }
    }
    // At t = pi/2 the phase wraps exactly and the readout is I_2 itself.
    let eb = build_eigenbasis_circuit(&plus, &spec, PI / 2.0, 1, EvolutionMode::Exact).unwrap();
    let est = run_eigenbasis_circuit(&eb, None).unwrap();
    assert!((est.point_value - 0.5).abs() < 1e-12);
}

#[test]
fn eigenbasis_controlled_power_count() {
    let spec = single_qubit_z_spec();
    let psi = QuditState::basis_state(SiteRegister::qubits(1), &[0]).unwrap();
    for m in 1..=4 {
        let eb = build_eigenbasis_circuit(&psi, &spec, 1.0, m, EvolutionMode::Exact).unwrap();
        assert_eq!(eb.controlled_u_applications_per_copy(), (1 << m) - 1);
        // Count gates carrying a control, per copy: copy 1 targets site m.
        let on_copy1 = eb
            .plan()
            .dense_gates()
            .filter(|g| !g.controls().is_empty() && g.targets().contains(&m))
            .count() as u64;
        assert_eq!(on_copy1, (1 << m) - 1);
    }
}

#[test]
fn eigenbasis_eigenstate_reads_one() {
    let spec = single_qubit_z_spec();
    let zero = QuditState::basis_state(SiteRegister::qubits(1), &[0]).unwrap();
    for m in 1..=4 {
        let eb = build_eigenbasis_circuit(&zero, &spec, 0.7, m, EvolutionMode::Exact).unwrap();
        let est = run_eigenbasis_circuit(&eb, None).unwrap();
        assert!((est.point_value - 1.0).abs() < 1e-11, "m={m}");
    }
}

#[test]
fn eigenbasis_bound_holds_on_random_ensemble() {
    // 20 GUE draws here; the full 500-trial study runs in the acceptance
    // suite.
    let mut worst_ratio = 0.0f64;
    for trial in 0..20u64 {
        let h = random_hermitian(8, 700 + trial);
        let reg = SiteRegister::new(vec![8]).unwrap();
        let spec = HamiltonianSpec::from_dense(reg.clone(), &h, "gue").unwrap();
        let psi = random_state(reg, 800 + trial).unwrap();
        let spectrum = eigendecompose(&h, None).unwrap();
        let t = PI / spectrum.width();
        assert!(resolution_bound_valid(spectrum.width(), t));
        let gap = min_gap(&spectrum).unwrap();
        let oracle = ipr_in_eigenbasis(psi.amplitudes(), &spectrum, 2)
            .unwrap()
            .value;
        for m in 2..=5usize {
            let eb = build_eigenbasis_circuit(&psi, &spec, t, m, EvolutionMode::Exact).unwrap();
            let est = run_eigenbasis_circuit(&eb, Some(gap)).unwrap();
            let eps = est.point_value - oracle;
            let bound = est.error_bound.unwrap();
            assert!(eps >= -1e-12, "trial {trial} m {m}: eps {eps}");
            assert!(eps <= bound + 1e-12, "trial {trial} m {m}: {eps} > {bound}");
            worst_ratio = worst_ratio.max(eps / bound);
        }
    }
    assert!(worst_ratio <= 1.0 + 1e-9);
}

#[test]
fn eigenbasis_bound_shrinks_four_fold_per_ancilla() {
    let bound_2 = resolution_error_bound(2, 0.5, 1.0).unwrap();
    let bound_3 = resolution_error_bound(3, 0.5, 1.0).unwrap();
    let bound_4 = resolution_error_bound(4, 0.5, 1.0).unwrap();
    assert!((bound_2 / bound_3 - 4.0).abs() < 1e-12);
    assert!((bound_3 / bound_4 - 4.0).abs() < 1e-12);
    // m = 0, Delta = pi, t = 1 -> pi^2/pi^2 = 1.
    assert!((resolution_error_bound(0, PI, 1.0).unwrap() - 1.0).abs() < 1e-12);
    assert!(resolution_error_bound(2, 0.0, 1.0).is_err());
    assert!(resolution_error_bound(2, 1.0, -0.5).is_err());
}

#[test]
fn eigenbasis_trotter_mode_matches_exact_at_high_step_count() {
    let spec = build_pxp(4, 0.5, true).unwrap();
    let neel = QuditState::basis_state(spec.register().clone(), &[0, 1, 0, 1]).unwrap();
    let t = 0.4;
    let m = 3;
    let exact = run_eigenbasis_circuit(
        &build_eigenbasis_circuit(&neel, &spec, t, m, EvolutionMode::Exact).unwrap(),
        None,
    )
    .unwrap();
    let trotter = run_eigenbasis_circuit(
        &build_eigenbasis_circuit(
            &neel,
            &spec,
            t,
            m,
            EvolutionMode::Trotter { n_steps: 64 },
        )
        .unwrap(),
        None,
    )
    .unwrap();
    assert!(
        (exact.point_value - trotter.point_value).abs() < 5e-3,
        "{} vs {}",
        exact.point_value,
        trotter.point_value
    );
    assert_eq!(trotter.n_trotter, Some(64));
}

#[test]
fn eigenbasis_sampled_reproducible() {
    let spec = single_qubit_z_spec();
    let plus = {
        let mut st = QuditState::basis_state(SiteRegister::qubits(1), &[0]).unwrap();
        st.apply_gate(&GateOp::hadamard(0)).unwrap();
        st
    };
    let eb = build_eigenbasis_circuit(&plus, &spec, PI / 2.0, 2, EvolutionMode::Exact).unwrap();
    let a = run_eigenbasis_sampled(&eb, None, 20_000, 31).unwrap();
    let b = run_eigenbasis_sampled(&eb, None, 20_000, 31).unwrap();
    assert_eq!(a.point_value, b.point_value);
    assert!((a.point_value - 0.5).abs() <= 5.0 * a.std_error.max(1e-4));
}

#[test]
fn eigenbasis_rejects_bad_arguments() {
    let spec = single_qubit_z_spec();
    let psi = QuditState::basis_state(SiteRegister::qubits(1), &[0]).unwrap();
    assert!(build_eigenbasis_circuit(&psi, &spec, 1.0, 0, EvolutionMode::Exact).is_err());
    assert!(build_eigenbasis_circuit(&psi, &spec, -1.0, 2, EvolutionMode::Exact).is_err());
    let wrong = QuditState::basis_state(SiteRegister::qubits(2), &[0, 0]).unwrap();
    assert!(build_eigenbasis_circuit(&wrong, &spec, 1.0, 2, EvolutionMode::Exact).is_err());
}

#[test]
fn validity_window_check() {
    assert!(resolution_bound_valid(PI, 1.0));
    assert!(resolution_bound_valid(2.0, PI / 2.0 - 0.2));
    assert!(!resolution_bound_valid(2.0 * PI, 1.0));
}

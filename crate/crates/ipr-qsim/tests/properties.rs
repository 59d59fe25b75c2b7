//! Property tests over the simulator invariants: norm preservation,
//! unitarity, kernel-embedding equivalence, moment ranges, and CSV
//! determinism.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ipr_qsim::circuits::{build_comp_basis_circuit, run_comp_basis_exact};
use ipr_qsim::ed::{hermitian_expm, ipr_direct};
use ipr_qsim::harness::{csv_text, run_oat_sweep, ExperimentConfig, ExperimentKind, GridSpec};
use ipr_qsim::random::{random_hermitian, random_state};
use ipr_qsim::statevector::{embed_full_matrix, Control, GateOp, QuditState, SiteRegister};

fn register_strategy() -> impl Strategy<Value = SiteRegister> {
    proptest::collection::vec(2usize..=3, 2..=4)
        .prop_map(|dims| SiteRegister::new(dims).unwrap())
}

fn arb_gate(register: &SiteRegister, seed: u64) -> GateOp {
    // A unitary from a random Hermitian generator on one or two sites,
    // optionally controlled on another site.
    let n = register.num_sites();
    let t1 = (seed as usize) % n;
    let t2 = (seed as usize / n) % n;
    let mut targets = vec![t1];
    if t2 != t1 {
        targets.push(t2);
    }
    let dim: usize = targets.iter().map(|&s| register.dim(s)).product();
    let h = random_hermitian(dim, seed);
    let u = hermitian_expm(&h, 0.6).unwrap();
    let free: Vec<usize> = (0..n).filter(|s| !targets.contains(s)).collect();
    let controls = if seed % 3 == 0 && !free.is_empty() {
        let c = free[(seed as usize / 7) % free.len()];
        vec![Control {
            site: c,
            value: (seed as usize / 11) % register.dim(c),
        }]
    } else {
        vec![]
    };
    GateOp::new(targets, u, controls).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Gate application preserves the norm and equals the explicit
    /// full-register matrix, and the adjoint gate undoes it.
    #[test]
    fn kernels_match_embedding_and_preserve_norm(
        reg in register_strategy(),
        seed in 0u64..10_000,
    ) {
        let gate = arb_gate(&reg, seed);
        let st = random_state(reg.clone(), seed.wrapping_add(1)).unwrap();
        let mut out = st.clone();
        out.apply_gate(&gate).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);

        let full = embed_full_matrix(&reg, &gate).unwrap();
        let x = nalgebra::DVector::from_column_slice(st.amplitudes());
        let y = &full * x;
        for (a, b) in out.amplitudes().iter().zip(y.iter()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }

        out.apply_gate(&gate.dagger()).unwrap();
        for (a, b) in out.amplitudes().iter().zip(st.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }

    /// Moments stay inside [N^(1-q), 1] and decrease with q.
    #[test]
    fn moment_range_and_monotonicity(
        reg in register_strategy(),
        seed in 0u64..10_000,
    ) {
        let st = random_state(reg.clone(), seed).unwrap();
        let n = reg.total_dim() as f64;
        let mut prev = f64::INFINITY;
        for q in 2..=5usize {
            let v = ipr_direct(st.amplitudes(), q).unwrap().value;
            prop_assert!(v >= n.powi(1 - q as i32) - 1e-12);
            prop_assert!(v <= 1.0 + 1e-12);
            prop_assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    /// The copy-circuit estimator agrees with the direct moment for
    /// arbitrary uniform-dimension registers.
    #[test]
    fn estimator_equivalence_qubits_and_qutrits(
        d in 2usize..=3,
        n in 1usize..=3,
        q in 2usize..=3,
        seed in 0u64..10_000,
    ) {
        let reg = SiteRegister::qudits(n, d).unwrap();
        let psi = random_state(reg, seed).unwrap();
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, q, None).unwrap()).unwrap();
        let direct = ipr_direct(psi.amplitudes(), q).unwrap().value;
        prop_assert!((est.point_value - direct).abs() <= 1e-10);
    }

    /// Measurement statistics are reproducible from the seed.
    #[test]
    fn sampling_determinism(seed in 0u64..10_000, shots in 1u64..5_000) {
        let st = random_state(SiteRegister::qubits(3), seed).unwrap();
        let a = st.sample_outcomes(&[0, 2], shots, seed).unwrap();
        let b = st.sample_outcomes(&[0, 2], shots, seed).unwrap();
        prop_assert_eq!(a.counts(), b.counts());
        prop_assert_eq!(a.total(), shots);
    }
}

/// A rotated basis state has moment 1 in the rotated basis: rotation
/// invariance of the maximum.
#[test]
fn rotated_basis_state_is_localized_in_rotated_basis() {
    for seed in 0..5u64 {
        let h = random_hermitian(2, 600 + seed);
        let v = hermitian_expm(&h, 1.0).unwrap();
        // Build |b_3> = V^dag |3> on two qubits from per-site rotations.
        let l = 2;
        let mut st = QuditState::basis_state(SiteRegister::qubits(l), &[1, 1]).unwrap();
        for k in 0..l {
            st.apply_gate(&GateOp::new(vec![k], v.adjoint(), vec![]).unwrap())
                .unwrap();
        }
        let rot = ipr_qsim::circuits::BasisRotation {
            unitaries: vec![v.clone(); l],
            label: "rotated".into(),
        };
        let est =
            run_comp_basis_exact(&build_comp_basis_circuit(&st, 2, Some(&rot)).unwrap()).unwrap();
        assert!((est.point_value - 1.0).abs() <= 1e-10, "{}", est.point_value);
    }
}

/// Identical config resolves to byte-identical CSV text.
#[test]
fn csv_is_deterministic() {
    let mut config = ExperimentConfig::new(ExperimentKind::OatSweep);
    config.t_grid = Some(GridSpec::linear(0.0, 0.5, 0.1));
    let a = csv_text(&run_oat_sweep(&config).unwrap());
    let b = csv_text(&run_oat_sweep(&config).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with("experiment,variable,value,m,"));
}

/// The embedding oracle refuses oversized registers rather than allocating.
#[test]
fn embedding_oracle_respects_cap() {
    let reg = SiteRegister::qubits(16);
    let gate = GateOp::hadamard(0);
    assert!(embed_full_matrix(&reg, &gate).is_err());
}

/// Empty rows still emit a header.
#[test]
fn empty_csv_has_header_only() {
    let text = csv_text(&[]);
    assert_eq!(text.lines().count(), 1);
}

/// Gate matrices that fail unitarity are rejected at construction.
#[test]
fn near_unitary_rejected_beyond_tolerance() {
    let mut u = DMatrix::<Complex64>::identity(2, 2);
    u[(0, 0)] = Complex64::new(1.0 + 1e-6, 0.0);
    assert!(GateOp::new(vec![0], u, vec![]).is_err());
}

//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured figure (visible with `--nocapture`). Criterion 5 has a
//! full-scale companion behind `--ignored`; everything else runs in the
//! default pass.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use ipr_qsim::circuits::{
    build_comp_basis_circuit, build_eigenbasis_circuit, resolution_bound_valid,
    resolution_error_bound, run_comp_basis_exact, run_comp_basis_sampled, run_eigenbasis_circuit,
    EvolutionMode,
};
use ipr_qsim::ed::{
    eigendecompose, hermitian_expm, ipr_degenerate, ipr_direct, ipr_in_eigenbasis, min_gap,
    operator_norm, survival_average_numeric,
};
use ipr_qsim::hamiltonians::{build_aklt, build_pxp, HamiltonianSpec};
use ipr_qsim::harness::{
    evolution_matrix, run_aklt_sweep, run_oat_sweep, run_pxp_sweep, ExperimentConfig,
    ExperimentKind, GridSpec,
};
use ipr_qsim::random::{random_hermitian, random_state};
use ipr_qsim::statevector::{GateOp, QuditState, SiteRegister};

fn ghz(l: usize) -> QuditState {
    let mut st = QuditState::basis_state(SiteRegister::qubits(l), &vec![0; l]).unwrap();
    st.apply_gate(&GateOp::hadamard(0)).unwrap();
    for k in 1..l {
        st.apply_gate(&GateOp::cnot(k - 1, k).unwrap()).unwrap();
    }
    st
}

/// Criterion 1: the circuit estimate `2 P_0 - 1` equals the direct moment
/// within 1e-10 over 200 random 2-4 qubit states at q in {2,3,4}.
#[test]
fn criterion_1_estimator_oracle_equivalence() {
    let tick = Instant::now();
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let n = 2 + (trial % 3) as usize;
        let q = 2 + ((trial / 3) % 3) as usize;
        let psi = random_state(SiteRegister::qubits(n), 10_000 + trial).unwrap();
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, q, None).unwrap()).unwrap();
        let direct = ipr_direct(psi.amplitudes(), q).unwrap().value;
        let dev = (est.point_value - direct).abs();
        assert!(
            dev <= 1e-10,
            "trial {trial} (n={n}, q={q}): |{} - {direct}| = {dev:e}",
            est.point_value
        );
        worst = worst.max(dev);
    }
    println!(
        "criterion 1 (estimator-oracle equivalence): PASS, max deviation {worst:.2e} over 200 states in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 2: closed-form moments. Basis state 1; GHZ 2^(1-q) to 1e-12;
/// product states (cos^2q + sin^2q)^L to 1e-10.
#[test]
fn criterion_2_closed_form_iprs() {
    let tick = Instant::now();
    // Basis states.
    for l in 2..=6 {
        let mut amps = vec![Complex64::ZERO; 1 << l];
        amps[3 % (1 << l)] = Complex64::ONE;
        for q in 2..=4 {
            assert_eq!(ipr_direct(&amps, q).unwrap().value, 1.0);
        }
    }
    // GHZ exactly.
    for l in 2..=6 {
        let st = ghz(l);
        for q in 2..=4usize {
            let v = ipr_direct(st.amplitudes(), q).unwrap().value;
            assert!(
                (v - 0.5f64.powi(q as i32 - 1)).abs() <= 1e-12,
                "GHZ({l}) q={q}: {v}"
            );
        }
    }
    // Product states.
    for &theta in &[0.3f64, 0.7, 1.1] {
        for &l in &[2usize, 4, 6] {
            let single = QuditState::from_amplitudes(
                SiteRegister::qubits(1),
                vec![
                    Complex64::new(theta.cos(), 0.0),
                    Complex64::new(theta.sin(), 0.0),
                ],
            )
            .unwrap();
            let mut st = single.clone();
            for _ in 1..l {
                st = st.tensor(&single).unwrap();
            }
            for q in 2..=4usize {
                let got = ipr_direct(st.amplitudes(), q).unwrap().value;
                let expect = (theta.cos().powi(2 * q as i32) + theta.sin().powi(2 * q as i32))
                    .powi(l as i32);
                assert!(
                    (got - expect).abs() <= 1e-10,
                    "theta={theta} L={l} q={q}: {got} vs {expect}"
                );
            }
        }
    }
    println!(
        "criterion 2 (closed-form IPRs): PASS in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 3: the twisting protocol at L = 4 reaches I^X_2 = 1 at t = 0
/// and 1/2 at t = pi/4 within 1e-8, and estimator matches oracle within
/// 1e-8 across the full default grid.
#[test]
fn criterion_3_twisting_protocol_curve() {
    let tick = Instant::now();
    let config = ExperimentConfig::new(ExperimentKind::OatSweep);
    let rows = run_oat_sweep(&config).unwrap();
    assert!(rows.len() >= 50, "need at least 50 grid points");

    let at_zero = rows
        .iter()
        .find(|r| r.value.abs() < 1e-12)
        .expect("t = 0 row");
    assert!((at_zero.estimator - 1.0).abs() <= 1e-8);
    let quarter = rows
        .iter()
        .find(|r| (r.value - PI / 4.0).abs() < 1e-9)
        .expect("t = pi/4 row");
    assert!(
        (quarter.estimator - 0.5).abs() <= 1e-8,
        "I at pi/4: {}",
        quarter.estimator
    );

    let mut worst = 0.0f64;
    for r in &rows {
        let dev = (r.estimator - r.oracle.unwrap()).abs();
        assert!(dev <= 1e-8, "t = {}: deviation {dev:e}", r.value);
        worst = worst.max(dev);
    }
    println!(
        "criterion 3 (twisting curve): PASS, {} points, max estimator-oracle deviation {worst:.2e} in {:.1}s",
        rows.len(),
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 4: resolution bound. 500 random 16x16 Hermitian matrices plus
/// PXP L=6, exact evolution, t with W t <= pi, m in 2..=6: zero violations
/// of 0 <= P - I_2 <= 4^-m pi^2/(Delta^2 t^2).
#[test]
fn criterion_4_resolution_bound() {
    let tick = Instant::now();
    let mut checks = 0u64;
    let slack = 1e-12;

    let mut run_case = |spec: &HamiltonianSpec, psi: &QuditState, label: &str| {
        let dense = spec.dense_matrix().unwrap();
        let spectrum = eigendecompose(&dense, None).unwrap();
        let t = PI / spectrum.width();
        assert!(resolution_bound_valid(spectrum.width(), t));
        let gap = min_gap(&spectrum).unwrap();
        let oracle = ipr_in_eigenbasis(psi.amplitudes(), &spectrum, 2)
            .unwrap()
            .value;
        for m in 2..=6usize {
            let eb = build_eigenbasis_circuit(psi, spec, t, m, EvolutionMode::Exact).unwrap();
            let est = run_eigenbasis_circuit(&eb, Some(gap)).unwrap();
            let eps = est.point_value - oracle;
            let bound = est.error_bound.unwrap();
            assert!(eps >= -slack, "{label} m={m}: eps_r = {eps:e} < 0");
            assert!(
                eps <= bound + slack,
                "{label} m={m}: eps_r = {eps:e} > bound {bound:e}"
            );
            checks += 1;
        }
    };

    for trial in 0..500u64 {
        let h = random_hermitian(16, 40_000 + trial);
        let reg = SiteRegister::new(vec![16]).unwrap();
        let spec = HamiltonianSpec::from_dense(reg.clone(), &h, "gue").unwrap();
        let psi = random_state(reg, 50_000 + trial).unwrap();
        run_case(&spec, &psi, &format!("gue-{trial}"));
    }
    let pxp = build_pxp(6, 0.5, true).unwrap();
    let neel = QuditState::basis_state(pxp.register().clone(), &[0, 1, 0, 1, 0, 1]).unwrap();
    run_case(&pxp, &neel, "pxp-l6");

    println!(
        "criterion 4 (resolution bound): PASS, zero violations over {checks} checks in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

fn pxp_sweep_check(l: usize) -> (f64, f64, usize) {
    let mut config = ExperimentConfig::new(ExperimentKind::PxpSweep);
    config.l = Some(l);
    config.t = Some(1.0);
    config.n_trotter = Some(10);
    config.m_list = Some(vec![3, 4, 5]);
    config.h_grid = Some(GridSpec::linear(0.0, 1.0, 0.05));
    let rows = run_pxp_sweep(&config).unwrap();

    let t = 1.0f64;
    let n_trotter = 10.0f64;
    let mut worst_margin = f64::NEG_INFINITY;
    for r in rows.iter().filter(|r| r.m == Some(5)) {
        let spec = build_pxp(l, r.value, true).unwrap();
        let h_norm = eigendecompose(&spec.dense_matrix().unwrap(), None)
            .unwrap()
            .spectral_norm();
        let allowance = h_norm * h_norm * t * t / (2.0 * n_trotter);
        let dev = (r.estimator - r.oracle.unwrap()).abs();
        let envelope = r.error_bound.unwrap() + allowance;
        assert!(
            dev <= envelope,
            "L={l} h={}: |est - ED| = {dev:e} > bound + trotter allowance {envelope:e}",
            r.value
        );
        worst_margin = worst_margin.max(dev / envelope);
    }

    // ED curve minimum within the critical window.
    let ed_rows: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.m == Some(3))
        .map(|r| (r.value, r.oracle.unwrap()))
        .collect();
    let (h_min, _) = ed_rows
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |(bh, bv), (h, v)| {
            if v < bv {
                (h, v)
            } else {
                (bh, bv)
            }
        });
    assert!(
        (0.5..=0.8).contains(&h_min),
        "ED minimum at h = {h_min}, outside [0.5, 0.8]"
    );
    (worst_margin, h_min, rows.len())
}

/// Criterion 5 (smoke scale): PXP L=6, t=1, n_T=10, m in {3,4,5}, h grid
/// step 0.05: every m=5 estimate within resolution bound + Trotter
/// allowance of the ED value, and the ED minimum inside [0.5, 0.8].
#[test]
fn criterion_5_pxp_thermalization_smoke_l6() {
    let tick = Instant::now();
    let (margin, h_min, n_rows) = pxp_sweep_check(6);
    println!(
        "criterion 5/L6 (PXP sweep, smoke): PASS, {n_rows} rows, ED minimum at h = {h_min:.2}, worst envelope use {margin:.2e} in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 5 (full scale, ~10 minutes single-threaded): PXP L=8.
/// Run with: cargo test -p ipr-qsim --test acceptance -- --ignored
#[test]
#[ignore = "full-scale run (~10 min); criterion also checked at L=6 above"]
fn criterion_5_pxp_thermalization_full_l8() {
    let tick = Instant::now();
    let (margin, h_min, n_rows) = pxp_sweep_check(8);
    println!(
        "criterion 5/L8 (PXP sweep, full): PASS, {n_rows} rows, ED minimum at h = {h_min:.2}, worst envelope use {margin:.2e} in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 6: AKLT L=4 qudit circuit vs ED across the field grid:
/// max deviation 1e-8, polarized limit I >= 0.99 at h = 50, monotone
/// non-decreasing over [1, 50].
#[test]
fn criterion_6_aklt_ground_state_sweep() {
    let tick = Instant::now();
    let config = ExperimentConfig::new(ExperimentKind::AkltSweep);
    let rows = run_aklt_sweep(&config).unwrap();

    let mut worst = 0.0f64;
    for r in &rows {
        let dev = (r.estimator - r.oracle.unwrap()).abs();
        assert!(dev <= 1e-8, "h = {}: deviation {dev:e}", r.value);
        worst = worst.max(dev);
    }
    let last = rows.last().unwrap();
    assert!((last.value - 50.0).abs() < 1e-9, "grid must end at h = 50");
    assert!(
        last.estimator >= 0.99,
        "I at h=50: {}",
        last.estimator
    );
    let tail: Vec<&ipr_qsim::harness::ResultRow> =
        rows.iter().filter(|r| r.value >= 1.0).collect();
    assert!(tail.len() >= 5);
    for pair in tail.windows(2) {
        assert!(
            pair[1].oracle.unwrap() >= pair[0].oracle.unwrap() - 1e-10,
            "not monotone at h = {}",
            pair[1].value
        );
    }
    // Small fields spread the ground state: strictly below 1.
    assert!(rows[0].oracle.unwrap() < 1.0 - 1e-3);
    println!(
        "criterion 6 (AKLT sweep): PASS, {} rows, max deviation {worst:.2e} in {:.1}s",
        rows.len(),
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 7: first-order product-formula error within
/// ||H||^2 t^2 / (2 n_T) for PXP and AKLT at L=4, t=1, n_T in {2,...,64},
/// with the error at 64 steps below the error at 2.
#[test]
fn criterion_7_trotter_bound() {
    let tick = Instant::now();
    for (label, spec) in [
        ("pxp", build_pxp(4, 0.5, true).unwrap()),
        ("aklt", build_aklt(4, 1.0).unwrap()),
    ] {
        let dense = spec.dense_matrix().unwrap();
        let h_norm = eigendecompose(&dense, None).unwrap().spectral_norm();
        let t = 1.0;
        let exact = hermitian_expm(&dense, t).unwrap();
        let mut first = None;
        let mut last = None;
        for n_steps in [2usize, 4, 8, 16, 32, 64] {
            let plan = ipr_qsim::hamiltonians::trotter_circuit(&spec, t, n_steps).unwrap();
            let u = evolution_matrix(&plan, spec.register().total_dim()).unwrap();
            let err = operator_norm(&(&u - &exact)).unwrap();
            let bound = h_norm * h_norm * t * t / (2.0 * n_steps as f64);
            assert!(
                err <= bound,
                "{label} n_T={n_steps}: error {err:e} > bound {bound:e}"
            );
            if n_steps == 2 {
                first = Some(err);
            }
            if n_steps == 64 {
                last = Some(err);
            }
        }
        assert!(
            last.unwrap() < first.unwrap(),
            "{label}: error did not shrink from n_T=2 to n_T=64"
        );
    }
    println!(
        "criterion 7 (product-formula bound): PASS, zero violations in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 8: degenerate spectra. A state inside a 3-fold degenerate
/// level reads P = 1 (m = 8, exact U) within 1e-6; a state mixed across two
/// groups matches sum_j p_j^2 within the resolution bound.
#[test]
fn criterion_8_degenerate_levels() {
    let tick = Instant::now();
    let reg = SiteRegister::new(vec![4]).unwrap();
    let h = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(3.0, 0.0),
    ]));
    let spec = HamiltonianSpec::from_dense(reg.clone(), &h, "degenerate").unwrap();
    let spectrum = eigendecompose(&h, None).unwrap();
    assert_eq!(spectrum.groups().len(), 2);
    let t = PI / spectrum.width();
    let gap = min_gap(&spectrum).unwrap();

    // Inside the degenerate subspace.
    let inside = QuditState::from_amplitudes(
        reg.clone(),
        vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.48),
            Complex64::new(0.64, 0.0),
            Complex64::ZERO,
        ],
    )
    .unwrap();
    let eb = build_eigenbasis_circuit(&inside, &spec, t, 8, EvolutionMode::Exact).unwrap();
    let est = run_eigenbasis_circuit(&eb, Some(gap)).unwrap();
    assert!(
        (est.point_value - 1.0).abs() <= 1e-6,
        "inside-subspace readout {}",
        est.point_value
    );

    // Split across the two groups: p = (3/4, 1/4) -> sum p^2 = 10/16.
    let mixed = QuditState::from_amplitudes(
        reg,
        vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::ZERO,
            Complex64::new(0.5, 0.0),
        ],
    )
    .unwrap();
    let projector = ipr_degenerate(mixed.amplitudes(), &spectrum, 2).unwrap().value;
    assert!((projector - 10.0 / 16.0).abs() < 1e-12);
    for m in [4usize, 8] {
        let eb = build_eigenbasis_circuit(&mixed, &spec, t, m, EvolutionMode::Exact).unwrap();
        let est = run_eigenbasis_circuit(&eb, Some(gap)).unwrap();
        let bound = resolution_error_bound(m, gap, t).unwrap();
        let eps = est.point_value - projector;
        assert!(
            eps >= -1e-12 && eps <= bound + 1e-12,
            "m={m}: eps {eps:e} outside [0, {bound:e}]"
        );
    }
    println!(
        "criterion 8 (degenerate levels): PASS in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 9: shot noise. Across 200 seeds at 10^3..10^5 shots the
/// empirical std stays within a factor 2 of 2 sqrt(P0(1-P0)/n) and the mean
/// sits within 5 combined standard errors of the exact value.
#[test]
fn criterion_9_shot_noise_contract() {
    let tick = Instant::now();
    let psi = ghz(4);
    let cb = build_comp_basis_circuit(&psi, 2, None).unwrap();
    let exact = run_comp_basis_exact(&cb).unwrap().point_value;
    let p0 = 0.5 * (1.0 + exact);

    for &shots in &[1_000u64, 10_000, 100_000] {
        let theory_std = 2.0 * (p0 * (1.0 - p0) / shots as f64).sqrt();
        let n_seeds = 200;
        let mut values = Vec::with_capacity(n_seeds);
        for seed in 0..n_seeds as u64 {
            let est = run_comp_basis_sampled(&cb, shots, 77_000 + seed).unwrap();
            values.push(est.point_value);
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (values.len() - 1) as f64;
        let emp_std = var.sqrt();
        assert!(
            emp_std <= 2.0 * theory_std && emp_std >= theory_std / 2.0,
            "shots {shots}: empirical std {emp_std:e} vs theory {theory_std:e}"
        );
        let combined = theory_std / (n_seeds as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 5.0 * combined,
            "shots {shots}: mean {mean} vs exact {exact} (5 sigma = {:e})",
            5.0 * combined
        );
    }
    println!(
        "criterion 9 (shot-noise contract): PASS in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

/// Criterion 10: the long-time survival average equals the
/// degeneracy-aware eigenbasis moment within 1e-2, for PXP L=6 and AKLT
/// L=3, at t_max = 1e4 / Delta.
#[test]
fn criterion_10_survival_probability_identity() {
    let tick = Instant::now();

    let pxp = build_pxp(6, 0.3, true).unwrap();
    let h = pxp.dense_matrix().unwrap();
    let spectrum = eigendecompose(&h, None).unwrap();
    let neel = QuditState::basis_state(pxp.register().clone(), &[0, 1, 0, 1, 0, 1]).unwrap();
    let gap = min_gap(&spectrum).unwrap();
    let avg = survival_average_numeric(neel.amplitudes(), &h, 1e4 / gap, 40_000).unwrap();
    let projector = ipr_degenerate(neel.amplitudes(), &spectrum, 2).unwrap().value;
    let dev_pxp = (avg - projector).abs();
    assert!(dev_pxp <= 1e-2, "PXP: {avg} vs {projector}");

    let aklt = build_aklt(3, 0.7).unwrap();
    let h = aklt.dense_matrix().unwrap();
    let spectrum = eigendecompose(&h, None).unwrap();
    let psi = random_state(aklt.register().clone(), 4242).unwrap();
    let gap = min_gap(&spectrum).unwrap();
    let avg = survival_average_numeric(psi.amplitudes(), &h, 1e4 / gap, 40_000).unwrap();
    let projector = ipr_degenerate(psi.amplitudes(), &spectrum, 2).unwrap().value;
    let dev_aklt = (avg - projector).abs();
    assert!(dev_aklt <= 1e-2, "AKLT: {avg} vs {projector}");

    println!(
        "criterion 10 (survival identity): PASS, deviations {dev_pxp:.2e} / {dev_aklt:.2e} in {:.1}s",
        tick.elapsed().as_secs_f64()
    );
}

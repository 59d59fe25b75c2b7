//! The `ipr-qsim verify` property suite: estimator-oracle equivalence,
//! closed-form values, norm preservation, the resolution bound study, and
//! the product-formula error bound. Exit is clean only when every check
//! passes.

use num_complex::Complex64;

use crate::circuits::{build_comp_basis_circuit, run_comp_basis_exact};
use crate::ed::{eigendecompose, ipr_degenerate, ipr_direct, survival_average_numeric};
use crate::error::Result;
use crate::hamiltonians::build_pxp;
use crate::random::random_state;
use crate::statevector::{GateOp, QuditState, SiteRegister};

use super::{run_experiment, ExperimentConfig, ExperimentKind};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Run the verification suite. `quick` shrinks the random ensembles to keep
/// the run under a few seconds.
pub fn run_verification(quick: bool) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();

    // Estimator equals the direct moment on random states.
    {
        let trials = if quick { 20 } else { 60 };
        let mut max_dev = 0.0f64;
        for trial in 0..trials {
            let n = 2 + trial % 3;
            let q = 2 + trial % 3;
            let psi = random_state(SiteRegister::qubits(n), 500 + trial as u64)?;
            let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, q, None)?)?;
            let direct = ipr_direct(psi.amplitudes(), q)?.value;
            max_dev = max_dev.max((est.point_value - direct).abs());
        }
        report.push(
            "estimator-oracle-equivalence",
            max_dev <= 1e-10,
            format!("max |circuit - direct| = {max_dev:.3e} over {trials} random states"),
        );
    }

    // Closed forms: GHZ and the product state.
    {
        let l = 4;
        let mut ghz = QuditState::basis_state(SiteRegister::qubits(l), &[0; 4])?;
        ghz.apply_gate(&GateOp::hadamard(0))?;
        for k in 1..l {
            ghz.apply_gate(&GateOp::cnot(k - 1, k)?)?;
        }
        let mut worst = 0.0f64;
        for q in 2..=4 {
            let est = run_comp_basis_exact(&build_comp_basis_circuit(&ghz, q, None)?)?;
            worst = worst.max((est.point_value - 0.5f64.powi(q as i32 - 1)).abs());
        }
        let theta: f64 = 0.7;
        let single = QuditState::from_amplitudes(
            SiteRegister::qubits(1),
            vec![
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(theta.sin(), 0.0),
            ],
        )?;
        let mut product = single.clone();
        for _ in 1..l {
            product = product.tensor(&single)?;
        }
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&product, 2, None)?)?;
        let expect = (theta.cos().powi(4) + theta.sin().powi(4)).powi(l as i32);
        worst = worst.max((est.point_value - expect).abs());
        report.push(
            "closed-form-values",
            worst <= 1e-10,
            format!("max deviation from closed forms = {worst:.3e}"),
        );
    }

    // Norm preservation through a deep random circuit.
    {
        let mut st = random_state(SiteRegister::qubits(4), 77)?;
        for k in 0..50u64 {
            let h = crate::random::random_hermitian(4, 900 + k);
            let u = crate::ed::hermitian_expm(&h, 0.37)?;
            let sites = vec![(k % 4) as usize, ((k + 1) % 4) as usize];
            st.apply_gate(&GateOp::new(sites, u, vec![])?)?;
        }
        let drift = (st.norm() - 1.0).abs();
        report.push(
            "norm-preservation",
            drift <= 1e-12,
            format!("|norm - 1| = {drift:.3e} after 50 two-site gates"),
        );
    }

    // Survival-probability identity against the projector moment.
    {
        let l = if quick { 4 } else { 6 };
        let spec = build_pxp(l, 0.3, true)?;
        let dense = spec.dense_matrix()?;
        let spectrum = eigendecompose(&dense, None)?;
        let neel_digits: Vec<usize> = (0..l).map(|i| i % 2).collect();
        let neel = QuditState::basis_state(spec.register().clone(), &neel_digits)?;
        let gap = crate::ed::min_gap(&spectrum)?;
        let t_max = 1e4 / gap;
        let avg = survival_average_numeric(neel.amplitudes(), &dense, t_max, 20_000)?;
        let projector = ipr_degenerate(neel.amplitudes(), &spectrum, 2)?.value;
        let dev = (avg - projector).abs();
        report.push(
            "survival-average-identity",
            dev <= 1e-2,
            format!("|time average - projector moment| = {dev:.3e}"),
        );
    }

    // The resolution and product-formula bound study.
    {
        let mut cfg = ExperimentConfig::new(ExperimentKind::BoundStudy);
        cfg.ensemble_size = Some(if quick { 60 } else { 500 });
        cfg.seed = Some(7);
        let rows = run_experiment(&cfg)?;
        let violations = rows
            .iter()
            .filter(|r| r.flag.contains("violation"))
            .count();
        report.push(
            "error-bound-study",
            violations == 0,
            format!("{violations} bound violations over {} rows", rows.len()),
        );
    }

    // Sampled estimator sanity: seeded, reproducible, near the exact value.
    {
        let mut plus = QuditState::basis_state(SiteRegister::qubits(2), &[0, 0])?;
        plus.apply_gate(&GateOp::hadamard(0))?;
        plus.apply_gate(&GateOp::cnot(0, 1)?)?;
        let cb = build_comp_basis_circuit(&plus, 2, None)?;
        let exact = run_comp_basis_exact(&cb)?.point_value;
        let a = crate::circuits::run_comp_basis_sampled(&cb, 100_000, 5)?;
        let b = crate::circuits::run_comp_basis_sampled(&cb, 100_000, 5)?;
        let reproducible = (a.point_value - b.point_value).abs() == 0.0;
        let close = (a.point_value - exact).abs() <= 5.0 * a.std_error.max(1e-4);
        report.push(
            "sampled-estimator",
            reproducible && close,
            format!(
                "sampled {} vs exact {} (std {:.2e}), reproducible: {}",
                a.point_value, exact, a.std_error, reproducible
            ),
        );
    }

    Ok(report)
}

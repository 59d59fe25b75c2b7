//! Sampled readout of the copy circuit: the estimator error shrinks as
//! 1/sqrt(shots), and ceil(q / eps^2) shots suffice for error eps
//! independent of system size.
//!
//! Run: cargo run --example shot_noise

use ipr_qsim::circuits::{
    build_comp_basis_circuit, required_shots, run_comp_basis_exact, run_comp_basis_sampled,
};
use ipr_qsim::statevector::{GateOp, QuditState, SiteRegister};

fn main() -> ipr_qsim::Result<()> {
    let l = 4;
    let mut ghz = QuditState::basis_state(SiteRegister::qubits(l), &vec![0; l])?;
    ghz.apply_gate(&GateOp::hadamard(0))?;
    for k in 1..l {
        ghz.apply_gate(&GateOp::cnot(k - 1, k)?)?;
    }
    let cb = build_comp_basis_circuit(&ghz, 2, None)?;
    let exact = run_comp_basis_exact(&cb)?.point_value;
    println!("GHZ({l}), q = 2: exact I_2 = {exact}");

    println!("\n{:>9} {:>14} {:>12} {:>12}", "shots", "estimate", "|error|", "std err");
    for &shots in &[100u64, 1_000, 10_000, 100_000, 1_000_000] {
        let mut rms = 0.0;
        let reps = 20;
        let mut last = 0.0;
        let mut last_std = 0.0;
        for seed in 0..reps {
            let est = run_comp_basis_sampled(&cb, shots, 40 + seed)?;
            rms += (est.point_value - exact).powi(2);
            last = est.point_value;
            last_std = est.std_error;
        }
        rms = (rms / reps as f64).sqrt();
        println!("{shots:>9} {last:>14.8} {rms:>12.3e} {last_std:>12.3e}");
    }

    println!("\nshots needed for a target absolute error (ceil(q / eps^2)):");
    for (q, eps) in [(2usize, 0.1f64), (2, 0.01), (4, 0.1)] {
        println!("  q = {q}, eps = {eps}: {}", required_shots(q, eps)?);
    }
    Ok(())
}

//! Estimate computational-basis inverse participation ratios with the
//! ancilla-interference circuit and compare against the direct moment.
//!
//! Run: cargo run --example ipr_computational_basis

use num_complex::Complex64;

use ipr_qsim::circuits::{build_comp_basis_circuit, run_comp_basis_exact};
use ipr_qsim::ed::ipr_direct;
use ipr_qsim::statevector::{GateOp, QuditState, SiteRegister};

fn main() -> ipr_qsim::Result<()> {
    // A GHZ state: I_q = 2^(1-q) for every Renyi index q.
    let l = 4;
    let mut ghz = QuditState::basis_state(SiteRegister::qubits(l), &vec![0; l])?;
    ghz.apply_gate(&GateOp::hadamard(0))?;
    for k in 1..l {
        ghz.apply_gate(&GateOp::cnot(k - 1, k)?)?;
    }

    println!("GHZ({l}) in the computational basis");
    println!("{:>3} {:>16} {:>16} {:>12}", "q", "circuit", "direct", "closed form");
    for q in 2..=4 {
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&ghz, q, None)?)?;
        let direct = ipr_direct(ghz.amplitudes(), q)?.value;
        println!(
            "{q:>3} {:>16.12} {direct:>16.12} {:>12.8}",
            est.point_value,
            0.5f64.powi(q as i32 - 1)
        );
    }

    // A tilted product state: I_q = (cos^2q + sin^2q)^L, exponentially
    // small in L for generic angles.
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
    println!("\nproduct state, theta = {theta}, L = {l}");
    println!("{:>3} {:>16} {:>16} {:>12}", "q", "circuit", "direct", "closed form");
    for q in 2..=4usize {
        let est = run_comp_basis_exact(&build_comp_basis_circuit(&product, q, None)?)?;
        let direct = ipr_direct(product.amplitudes(), q)?.value;
        let closed =
            (theta.cos().powi(2 * q as i32) + theta.sin().powi(2 * q as i32)).powi(l as i32);
        println!("{q:>3} {:>16.12} {direct:>16.12} {closed:>12.8}", est.point_value);
    }
    Ok(())
}

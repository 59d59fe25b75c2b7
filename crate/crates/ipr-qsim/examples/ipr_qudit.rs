//! The qudit generalization: SUM gates replace CNOTs while the ancilla
//! stays a qubit. Estimates I_q for qutrit registers.
//!
//! Run: cargo run --example ipr_qudit

use ipr_qsim::circuits::{build_comp_basis_circuit, run_comp_basis_exact};
use ipr_qsim::ed::{ipr_direct, participation_entropy};
use ipr_qsim::random::random_state;
use ipr_qsim::statevector::{QuditState, SiteRegister};

fn main() -> ipr_qsim::Result<()> {
    let reg = SiteRegister::qudits(2, 3)?;

    // A qutrit basis state is fully localized.
    let basis = QuditState::basis_state(reg.clone(), &[2, 1])?;
    let est = run_comp_basis_exact(&build_comp_basis_circuit(&basis, 2, None)?)?;
    println!("|21> of two qutrits: I_2 = {:.12}", est.point_value);

    // Random qutrit states spread over all 9 basis states.
    println!("\nrandom two-qutrit states");
    println!(
        "{:>6} {:>3} {:>16} {:>16} {:>10}",
        "seed", "q", "circuit", "direct", "S_q"
    );
    for seed in 1..=3u64 {
        let psi = random_state(reg.clone(), seed)?;
        for q in 2..=3 {
            let est = run_comp_basis_exact(&build_comp_basis_circuit(&psi, q, None)?)?;
            let direct = ipr_direct(psi.amplitudes(), q)?.value;
            let entropy = participation_entropy(direct, q)?;
            println!(
                "{seed:>6} {q:>3} {:>16.12} {direct:>16.12} {entropy:>10.6}",
                est.point_value
            );
        }
    }
    println!("\nuniform spread over 9 states would give I_2 = {:.6}", 1.0 / 9.0);
    Ok(())
}

//! The survival-probability identity: the infinite-time average of
//! |<psi(t)|psi(0)>|^2 equals the eigenbasis I_2 of the initial state,
//! computed degeneracy-safe through spectral projectors.
//!
//! Run: cargo run --example survival_probability

use ipr_qsim::ed::{eigendecompose, ipr_degenerate, min_gap, survival_average_numeric};
use ipr_qsim::hamiltonians::{build_aklt, build_pxp};
use ipr_qsim::statevector::QuditState;

fn main() -> ipr_qsim::Result<()> {
    // PXP chain started from the Neel state.
    let pxp = build_pxp(6, 0.3, true)?;
    let h = pxp.dense_matrix()?;
    let spectrum = eigendecompose(&h, None)?;
    let neel = QuditState::basis_state(pxp.register().clone(), &[0, 1, 0, 1, 0, 1])?;
    let gap = min_gap(&spectrum)?;
    let projector = ipr_degenerate(neel.amplitudes(), &spectrum, 2)?.value;

    println!("PXP L=6 h=0.3, Neel state; {} degenerate level groups", spectrum.groups().len());
    println!("projector moment sum_j p_j^2 = {projector:.8}");
    println!("{:>12} {:>14} {:>10}", "t_max", "time average", "gap");
    for factor in [1e1, 1e2, 1e3, 1e4] {
        let t_max = factor / gap;
        let avg = survival_average_numeric(neel.amplitudes(), &h, t_max, 40_000)?;
        println!("{t_max:>12.2e} {avg:>14.8} {gap:>10.4}");
    }

    // The AKLT chain shows the same convergence with qutrit sites.
    let aklt = build_aklt(3, 0.7)?;
    let h = aklt.dense_matrix()?;
    let spectrum = eigendecompose(&h, None)?;
    let psi = ipr_qsim::random::random_state(aklt.register().clone(), 4242)?;
    let gap = min_gap(&spectrum)?;
    let projector = ipr_degenerate(psi.amplitudes(), &spectrum, 2)?.value;
    let avg = survival_average_numeric(psi.amplitudes(), &h, 1e4 / gap, 40_000)?;
    println!("\nAKLT L=3 h=0.7, random initial state");
    println!("projector moment {projector:.8}, long-time average {avg:.8}");
    Ok(())
}

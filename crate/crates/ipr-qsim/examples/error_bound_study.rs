//! Stress the eigenbasis estimator's resolution bound over a random
//! Hermitian ensemble: eps_r = P(0..0) - I_2 must stay in
//! [0, 4^-m pi^2/(Delta^2 t^2)] whenever the spectral spread keeps
//! W t <= pi. Counts violations (expected: none).
//!
//! Run: cargo run --example error_bound_study [ensemble_size]

use ipr_qsim::harness::{emit_csv, init_thread_pool, run_bound_study, ExperimentConfig, ExperimentKind};

fn main() -> ipr_qsim::Result<()> {
    init_thread_pool();
    let ensemble: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(200);

    let mut config = ExperimentConfig::new(ExperimentKind::BoundStudy);
    config.ensemble_size = Some(ensemble);
    config.seed = Some(7);
    let rows = run_bound_study(&config)?;

    let trials = rows.iter().filter(|r| r.variable == "trial").count();
    let violations = rows.iter().filter(|r| r.flag.contains("violation")).count();
    println!("{trials} resolution-bound checks over {ensemble} random 16x16 Hermitian matrices");
    println!("plus the PXP L=6 benchmark and the product-formula error rows");
    println!("violations: {violations}");

    // Worst-case use of the bound per ancilla count.
    for m in [2usize, 3, 4, 5, 6] {
        let worst = rows
            .iter()
            .filter(|r| r.m == Some(m) && r.variable == "trial")
            .map(|r| r.estimator / r.error_bound.unwrap())
            .fold(0.0f64, f64::max);
        println!("m = {m}: worst eps_r / bound = {worst:.4}");
    }

    let path = std::path::Path::new("results/bound_study.csv");
    emit_csv(&rows, path)?;
    println!("rows written to {}", path.display());
    assert_eq!(violations, 0);
    Ok(())
}

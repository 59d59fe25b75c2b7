//! The estimator circuits: computational-basis IPR via an ancilla
//! interference test over q state copies (CNOT/SUM entangling layer plus a
//! controlled cyclic permutation), and eigenbasis IPR via controlled powers
//! of the evolution operator with a Fourier transform on an ancilla
//! register.
//!
//! The computational-basis circuits run on the sparse engine: their register
//! is one ancilla plus `2q - 1` copies of the input register, but the state
//! support never exceeds `2 D^q`. The eigenbasis circuits entangle densely
//! and run on the strided dense kernels.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ed::hermitian_expm;
use crate::error::{Error, Result};
use crate::hamiltonians::{trotter_circuit, HamiltonianSpec};
use crate::statevector::{
    qft_gate_sequence, sample_multinomial, GateOp, QuditState, SiteRegister, SparseState,
};

/// One element of a circuit: a dense (controlled) unitary or a structured
/// conditional cyclic block permutation.
#[derive(Debug, Clone)]
pub enum PlanGate {
    Dense(GateOp),
    BlockCycle {
        control: usize,
        blocks: Vec<Vec<usize>>,
    },
}

/// An ordered gate list over a register, with the readout pattern whose
/// probability encodes the estimate.
#[derive(Debug, Clone)]
pub struct CircuitPlan {
    register: SiteRegister,
    gates: Vec<PlanGate>,
    readout_sites: Vec<usize>,
    readout_target: Vec<usize>,
}

impl CircuitPlan {
    /// A plan that is pure evolution, with no readout attached.
    pub fn evolution(register: SiteRegister, gates: Vec<GateOp>) -> Self {
        CircuitPlan {
            register,
            gates: gates.into_iter().map(PlanGate::Dense).collect(),
            readout_sites: vec![],
            readout_target: vec![],
        }
    }

    pub fn register(&self) -> &SiteRegister {
        &self.register
    }

    pub fn gates(&self) -> &[PlanGate] {
        &self.gates
    }

    pub fn readout_sites(&self) -> &[usize] {
        &self.readout_sites
    }

    pub fn readout_target(&self) -> &[usize] {
        &self.readout_target
    }

    /// Plain gates of an evolution plan (no block cycles, controls ignored).
    pub fn dense_gates(&self) -> impl Iterator<Item = &GateOp> {
        self.gates.iter().filter_map(|g| match g {
            PlanGate::Dense(op) => Some(op),
            PlanGate::BlockCycle { .. } => None,
        })
    }

    pub fn execute_dense(&self, state: &mut QuditState) -> Result<()> {
        if state.register() != &self.register {
            return Err(Error::DimensionMismatch(
                "state register does not match plan register".into(),
            ));
        }
        for gate in &self.gates {
            match gate {
                PlanGate::Dense(op) => state.apply_gate(op)?,
                PlanGate::BlockCycle { control, blocks } => {
                    state.apply_block_cycle(*control, blocks)?
                }
            }
        }
        state.check_norm()
    }

    pub fn execute_sparse(&self, state: &mut SparseState) -> Result<()> {
        if state.register() != &self.register {
            return Err(Error::DimensionMismatch(
                "state register does not match plan register".into(),
            ));
        }
        for gate in &self.gates {
            match gate {
                PlanGate::Dense(op) => state.apply_gate(op)?,
                PlanGate::BlockCycle { control, blocks } => {
                    state.apply_block_cycle(*control, blocks)?
                }
            }
        }
        state.check_norm()
    }
}

/// An IPR estimate extracted from a circuit, in exact-marginal or sampled
/// mode, together with the analytic error bound when one applies.
#[derive(Debug, Clone)]
pub struct IprEstimate {
    pub q: usize,
    pub point_value: f64,
    /// `None` in exact-marginal mode.
    pub n_shots: Option<u64>,
    /// Standard error of `point_value`; 0 in exact mode.
    pub std_error: f64,
    /// Resolution bound `4^{-m} pi^2 / (Delta^2 t^2)` when the minimum gap
    /// was supplied (eigenbasis circuit only).
    pub error_bound: Option<f64>,
    pub m: Option<usize>,
    pub t: Option<f64>,
    pub n_trotter: Option<usize>,
    pub basis_label: String,
}

/// A per-site change of basis applied to every copy before the entangling
/// layer, expressing the input state in the measurement basis.
#[derive(Debug, Clone)]
pub struct BasisRotation {
    pub unitaries: Vec<DMatrix<Complex64>>,
    pub label: String,
}

/// The local rotation onto the Pauli-X eigenbasis: a Hadamard on every site.
/// Involutive, so it serves as both the basis change and its inverse.
pub fn basis_rotation_x(l: usize) -> BasisRotation {
    let h = GateOp::hadamard(0).unitary().clone();
    BasisRotation {
        unitaries: vec![h; l],
        label: "pauli-x".into(),
    }
}

/// The computational-basis estimator circuit together with the input state
/// it measures.
#[derive(Debug, Clone)]
pub struct CompBasisPlan {
    plan: CircuitPlan,
    psi: QuditState,
    q: usize,
    basis_label: String,
}

impl CompBasisPlan {
    pub fn plan(&self) -> &CircuitPlan {
        &self.plan
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `|0> (x) |psi>^q (x) |0...0>^(q-1)` on the sparse engine.
    pub fn initial_sparse(&self) -> Result<SparseState> {
        let zero = QuditState::basis_state(SiteRegister::qubits(1), &[0])?;
        let blank = QuditState::basis_state(
            self.psi.register().clone(),
            &vec![0; self.psi.register().num_sites()],
        )?;
        let mut factors: Vec<&QuditState> = vec![&zero];
        for _ in 0..self.q {
            factors.push(&self.psi);
        }
        for _ in 0..(self.q - 1) {
            factors.push(&blank);
        }
        SparseState::from_product(&factors)
    }

    /// Same initial state as a dense vector; only for validation on small
    /// registers.
    pub fn initial_dense(&self) -> Result<QuditState> {
        let zero = QuditState::basis_state(SiteRegister::qubits(1), &[0])?;
        let blank = QuditState::basis_state(
            self.psi.register().clone(),
            &vec![0; self.psi.register().num_sites()],
        )?;
        let mut state = zero;
        for _ in 0..self.q {
            state = state.tensor(&self.psi)?;
        }
        for _ in 0..(self.q - 1) {
            state = state.tensor(&blank)?;
        }
        Ok(state)
    }
}

/// Build the ancilla-interference circuit estimating `I_q` in the
/// computational basis (optionally after a local basis rotation).
///
/// Register: 1 ancilla qubit, q copies of `psi`'s register, and q-1 blank
/// register copies. Gates: the optional rotation on every copy, a site-wise
/// CNOT/SUM layer copying registers 2..q onto the blanks, then
/// Hadamard - controlled cyclic permutation of the q copies - Hadamard on
/// the ancilla. `P(ancilla = 0) = (1 + I_q) / 2`.
pub fn build_comp_basis_circuit(
    psi: &QuditState,
    q: usize,
    rotation: Option<&BasisRotation>,
) -> Result<CompBasisPlan> {
    if q < 2 {
        return Err(Error::Domain("the Renyi index q must be >= 2".into()));
    }
    let n = psi.register().num_sites();
    let d = psi.register().dim(0);
    if psi.register().dims().iter().any(|&dk| dk != d) {
        return Err(Error::UnsupportedRegister(
            "the copy circuit requires a uniform local dimension".into(),
        ));
    }
    if let Some(rot) = rotation {
        if rot.unitaries.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} rotation unitaries for {} sites",
                rot.unitaries.len(),
                n
            )));
        }
    }

    let mut register = SiteRegister::qubits(1);
    for _ in 0..(2 * q - 1) {
        register = register.concat(psi.register())?;
    }

    let copy_site = |c: usize, k: usize| 1 + c * n + k;
    let blank_site = |b: usize, k: usize| 1 + q * n + b * n + k;

    let mut gates: Vec<PlanGate> = Vec::new();
    if let Some(rot) = rotation {
        for c in 0..q {
            for (k, u) in rot.unitaries.iter().enumerate() {
                gates.push(PlanGate::Dense(GateOp::new(
                    vec![copy_site(c, k)],
                    u.clone(),
                    vec![],
                )?));
            }
        }
    }
    for c in 1..q {
        for k in 0..n {
            gates.push(PlanGate::Dense(GateOp::sum_d(
                copy_site(c, k),
                blank_site(c - 1, k),
                d,
            )?));
        }
    }
    gates.push(PlanGate::Dense(GateOp::hadamard(0)));
    gates.push(PlanGate::BlockCycle {
        control: 0,
        blocks: (0..q).map(|c| (0..n).map(|k| copy_site(c, k)).collect()).collect(),
    });
    gates.push(PlanGate::Dense(GateOp::hadamard(0)));

    Ok(CompBasisPlan {
        plan: CircuitPlan {
            register,
            gates,
            readout_sites: vec![0],
            readout_target: vec![0],
        },
        psi: psi.clone(),
        q,
        basis_label: rotation
            .map(|r| r.label.clone())
            .unwrap_or_else(|| "computational".into()),
    })
}

/// Execute the circuit and read the exact marginal `P_0` on the ancilla:
/// the estimate is `2 P_0 - 1`.
pub fn run_comp_basis_exact(cb: &CompBasisPlan) -> Result<IprEstimate> {
    let mut state = cb.initial_sparse()?;
    cb.plan.execute_sparse(&mut state)?;
    let p0 = state.outcome_probability(&cb.plan.readout_sites, &cb.plan.readout_target)?;
    Ok(IprEstimate {
        q: cb.q,
        point_value: 2.0 * p0 - 1.0,
        n_shots: None,
        std_error: 0.0,
        error_bound: None,
        m: None,
        t: None,
        n_trotter: None,
        basis_label: cb.basis_label.clone(),
    })
}

/// Execute the circuit and estimate `P_0` from `n_shots` seeded ancilla
/// measurements: point value `2 count_0/n - 1`, standard error
/// `2 sqrt(p(1-p)/n)`.
pub fn run_comp_basis_sampled(cb: &CompBasisPlan, n_shots: u64, seed: u64) -> Result<IprEstimate> {
    if n_shots == 0 {
        return Err(Error::Domain("n_shots must be >= 1".into()));
    }
    let mut state = cb.initial_sparse()?;
    cb.plan.execute_sparse(&mut state)?;
    let probs = state.marginal_distribution(&cb.plan.readout_sites)?;
    let counts = sample_multinomial(&probs, vec![2], n_shots, seed);
    let p_hat = counts.counts()[0] as f64 / n_shots as f64;
    Ok(IprEstimate {
        q: cb.q,
        point_value: 2.0 * p_hat - 1.0,
        n_shots: Some(n_shots),
        std_error: 2.0 * (p_hat * (1.0 - p_hat) / n_shots as f64).sqrt(),
        error_bound: None,
        m: None,
        t: None,
        n_trotter: None,
        basis_label: cb.basis_label.clone(),
    })
}

/// Shots needed to resolve `I_q` to absolute error `epsilon`:
/// `ceil(q / epsilon^2)`, the sample-complexity scaling with its constant
/// fixed at 1.
pub fn required_shots(q: usize, epsilon: f64) -> Result<u64> {
    if epsilon <= 0.0 {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    Ok((q as f64 / (epsilon * epsilon)).ceil() as u64)
}

/// How the evolution operator inside the eigenbasis circuit is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMode {
    /// Dense `exp(-i H t)` from the eigendecomposition.
    Exact,
    /// First-order product formula with this many steps per single power
    /// of U.
    Trotter { n_steps: usize },
}

/// The eigenbasis estimator circuit with its input state.
#[derive(Debug, Clone)]
pub struct EigenbasisPlan {
    plan: CircuitPlan,
    psi: QuditState,
    m: usize,
    t: f64,
    mode: EvolutionMode,
}

impl EigenbasisPlan {
    pub fn plan(&self) -> &CircuitPlan {
        &self.plan
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mode(&self) -> EvolutionMode {
        self.mode
    }

    /// `|0>^m (x) |psi> (x) |psi>`.
    pub fn initial_dense(&self) -> Result<QuditState> {
        let anc = QuditState::basis_state(SiteRegister::qubits(self.m), &vec![0; self.m])?;
        anc.tensor(&self.psi)?.tensor(&self.psi)
    }

    /// Number of controlled applications of U (or U^dag) emitted per copy;
    /// one power `U^{2^j}` is realized as `2^j` repetitions.
    pub fn controlled_u_applications_per_copy(&self) -> u64 {
        (1u64 << self.m) - 1
    }
}

/// Build the phase-estimation style circuit measuring `I_2` in the
/// eigenbasis of `spec`.
///
/// Register: m ancilla qubits then two copies of `psi`'s register. Gates:
/// Hadamards on the ancillas; for the ancilla of binary weight `2^j`, `2^j`
/// repetitions of controlled-U on copy 1 and controlled-U^dag on copy 2;
/// the Fourier transform on the ancillas. The all-zeros ancilla probability
/// is `I_2 + eps_r` with `0 <= eps_r <= 4^{-m} pi^2/(Delta^2 t^2)`.
pub fn build_eigenbasis_circuit(
    psi: &QuditState,
    spec: &HamiltonianSpec,
    t: f64,
    m: usize,
    mode: EvolutionMode,
) -> Result<EigenbasisPlan> {
    if m == 0 {
        return Err(Error::Domain("need at least one ancilla qubit".into()));
    }
    if t <= 0.0 {
        return Err(Error::Domain("evolution time must be positive".into()));
    }
    if psi.register() != spec.register() {
        return Err(Error::DimensionMismatch(
            "state register does not match Hamiltonian register".into(),
        ));
    }
    let n = psi.register().num_sites();

    // One power of U as gates on sites 0..n, later shifted onto the copies.
    let u_gates: Vec<GateOp> = match mode {
        EvolutionMode::Exact => {
            let h = spec.dense_matrix()?;
            let u = hermitian_expm(&h, t)?;
            vec![GateOp::new((0..n).collect(), u, vec![])?]
        }
        EvolutionMode::Trotter { n_steps } => trotter_circuit(spec, t, n_steps)?
            .dense_gates()
            .cloned()
            .collect(),
    };
    let u_dagger: Vec<GateOp> = u_gates.iter().rev().map(GateOp::dagger).collect();

    let mut register = SiteRegister::qubits(m);
    register = register.concat(psi.register())?.concat(psi.register())?;

    let mut gates: Vec<PlanGate> = Vec::new();
    for a in 0..m {
        gates.push(PlanGate::Dense(GateOp::hadamard(a)));
    }
    for a in 0..m {
        // Site a is the most significant ancilla digit: weight 2^(m-1-a).
        let power = 1u64 << (m - 1 - a);
        for _ in 0..power {
            for g in &u_gates {
                gates.push(PlanGate::Dense(g.shift_sites(m).controlled(a, 1)?));
            }
            for g in &u_dagger {
                gates.push(PlanGate::Dense(g.shift_sites(m + n).controlled(a, 1)?));
            }
        }
    }
    let ancilla_sites: Vec<usize> = (0..m).collect();
    for g in qft_gate_sequence(&register, &ancilla_sites)? {
        gates.push(PlanGate::Dense(g));
    }

    Ok(EigenbasisPlan {
        plan: CircuitPlan {
            register,
            gates,
            readout_sites: ancilla_sites,
            readout_target: vec![0; m],
        },
        psi: psi.clone(),
        m,
        t,
        mode,
    })
}

fn eigenbasis_estimate(
    eb: &EigenbasisPlan,
    gap: Option<f64>,
    point_value: f64,
    n_shots: Option<u64>,
    std_error: f64,
) -> Result<IprEstimate> {
    let error_bound = match gap {
        Some(delta) => Some(resolution_error_bound(eb.m, delta, eb.t)?),
        None => None,
    };
    Ok(IprEstimate {
        q: 2,
        point_value,
        n_shots,
        std_error,
        error_bound,
        m: Some(eb.m),
        t: Some(eb.t),
        n_trotter: match eb.mode {
            EvolutionMode::Trotter { n_steps } => Some(n_steps),
            EvolutionMode::Exact => None,
        },
        basis_label: "eigenbasis".into(),
    })
}

/// Execute on `|0>^m (x) |psi>^2` and read the exact all-zeros marginal on
/// the ancillas. Supplying the minimum spectral gap attaches the resolution
/// bound.
pub fn run_eigenbasis_circuit(eb: &EigenbasisPlan, gap: Option<f64>) -> Result<IprEstimate> {
    let mut state = eb.initial_dense()?;
    eb.plan.execute_dense(&mut state)?;
    let p = state.outcome_probability(&eb.plan.readout_sites, &eb.plan.readout_target)?;
    eigenbasis_estimate(eb, gap, p, None, 0.0)
}

/// Sampled readout: multinomial draws over the joint ancilla outcomes.
pub fn run_eigenbasis_sampled(
    eb: &EigenbasisPlan,
    gap: Option<f64>,
    n_shots: u64,
    seed: u64,
) -> Result<IprEstimate> {
    if n_shots == 0 {
        return Err(Error::Domain("n_shots must be >= 1".into()));
    }
    let mut state = eb.initial_dense()?;
    eb.plan.execute_dense(&mut state)?;
    let probs = state.marginal_distribution(&eb.plan.readout_sites)?;
    let counts = sample_multinomial(&probs, vec![2; eb.m], n_shots, seed);
    let p_hat = counts.counts()[0] as f64 / n_shots as f64;
    let std_error = (p_hat * (1.0 - p_hat) / n_shots as f64).sqrt();
    eigenbasis_estimate(eb, gap, p_hat, Some(n_shots), std_error)
}

/// Resolution error bound of the eigenbasis estimator:
/// `4^{-m} pi^2 / (Delta^2 t^2)`.
///
/// The derivation requires every pairwise level difference to satisfy
/// `|e_i - e_j| t <= pi`; [`resolution_bound_valid`] checks that window
/// from the spectral spread.
pub fn resolution_error_bound(m: usize, delta: f64, t: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::Domain(format!(
            "minimum gap must be positive, got {delta}"
        )));
    }
    if t <= 0.0 {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    Ok(0.25f64.powi(m as i32) * PI * PI / (delta * delta * t * t))
}

/// True when the spectral spread `W = e_max - e_min` keeps all phase
/// differences within the window the bound's proof needs: `W t <= pi`.
pub fn resolution_bound_valid(width: f64, t: f64) -> bool {
    width * t <= PI * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests;

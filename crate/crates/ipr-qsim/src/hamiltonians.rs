//! Spin-chain Hamiltonians as symbolic sums of local-operator products,
//! their dense Hermitian matrices, and first-order product-formula circuits
//! for `exp(-i H t)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuits::CircuitPlan;
use crate::ed::{hermiticity_deviation, hermitian_expm};
use crate::error::{Error, Result};
use crate::statevector::{GateOp, SiteRegister};

/// Default cap on the dimension of materialized dense matrices.
pub const DENSE_MATRIX_CAP: usize = 1 << 14;

/// Entries of product-formula gate matrices below this magnitude are exact
/// zeros of the generator's structure up to eigensolver roundoff; rounding
/// them away keeps the strided kernels on the nonzero structure.
const GATE_SNAP_TOL: f64 = 1e-14;

/// One operator factor acting on a single site.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    site: usize,
    matrix: DMatrix<Complex64>,
}

impl LocalOperator {
    pub fn new(site: usize, matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "local operator not square");
        LocalOperator { site, matrix }
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn pauli_x(site: usize) -> Self {
        Self::new(site, matrix2(&[0.0, 1.0, 1.0, 0.0]))
    }

    pub fn pauli_y(site: usize) -> Self {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ],
        );
        Self::new(site, m)
    }

    pub fn pauli_z(site: usize) -> Self {
        Self::new(site, matrix2(&[1.0, 0.0, 0.0, -1.0]))
    }

    /// Projector `|0><0|` on a qubit site.
    pub fn projector0(site: usize) -> Self {
        Self::new(site, matrix2(&[1.0, 0.0, 0.0, 0.0]))
    }

    pub fn identity(site: usize, d: usize) -> Self {
        Self::new(site, DMatrix::identity(d, d))
    }

    /// Spin-1 S^x in the S^z basis (+1, 0, -1).
    pub fn spin1_x(site: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            site,
            matrix3(&[0.0, s, 0.0, s, 0.0, s, 0.0, s, 0.0]),
        )
    }

    pub fn spin1_y(site: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::ZERO,
                Complex64::new(0.0, -s),
                Complex64::ZERO,
                Complex64::new(0.0, s),
                Complex64::ZERO,
                Complex64::new(0.0, -s),
                Complex64::ZERO,
                Complex64::new(0.0, s),
                Complex64::ZERO,
            ],
        );
        Self::new(site, m)
    }

    pub fn spin1_z(site: usize) -> Self {
        Self::new(site, matrix3(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]))
    }
}

fn matrix2(re: &[f64; 4]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &re.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(),
    )
}

fn matrix3(re: &[f64; 9]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        3,
        3,
        &re.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(),
    )
}

/// `coefficient * (factor_0 (x) factor_1 (x) ...)`, factors on strictly
/// increasing sites. A term with no factors is `coefficient * identity`.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    coefficient: f64,
    factors: Vec<LocalOperator>,
}

impl HamiltonianTerm {
    pub fn new(coefficient: f64, factors: Vec<LocalOperator>) -> Result<Self> {
        for pair in factors.windows(2) {
            if pair[1].site() <= pair[0].site() {
                return Err(Error::UnsupportedTerm(format!(
                    "factor sites must be strictly increasing, got {} then {}",
                    pair[0].site(),
                    pair[1].site()
                )));
            }
        }
        Ok(HamiltonianTerm {
            coefficient,
            factors,
        })
    }

    /// A constant `coefficient * identity` term.
    pub fn scalar(coefficient: f64) -> Self {
        HamiltonianTerm {
            coefficient,
            factors: vec![],
        }
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[LocalOperator] {
        &self.factors
    }

    pub fn support(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.site()).collect()
    }

    /// Kronecker product of the factors (coefficient not included).
    pub fn block_matrix(&self) -> DMatrix<Complex64> {
        let mut block = DMatrix::<Complex64>::identity(1, 1);
        for f in &self.factors {
            block = block.kronecker(f.matrix());
        }
        block
    }
}

/// A Hamiltonian as a labeled sum of terms over a register.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    register: SiteRegister,
    terms: Vec<HamiltonianTerm>,
    label: String,
}

impl HamiltonianSpec {
    pub fn new(
        register: SiteRegister,
        terms: Vec<HamiltonianTerm>,
        label: impl Into<String>,
    ) -> Result<Self> {
        for term in &terms {
            for f in term.factors() {
                if f.site() >= register.num_sites() {
                    return Err(Error::UnsupportedTerm(format!(
                        "factor site {} out of range for {}-site register",
                        f.site(),
                        register.num_sites()
                    )));
                }
                if f.dim() != register.dim(f.site()) {
                    return Err(Error::UnsupportedTerm(format!(
                        "factor on site {} is {}x{} but the site has local dim {}",
                        f.site(),
                        f.dim(),
                        f.dim(),
                        register.dim(f.site())
                    )));
                }
            }
        }
        Ok(HamiltonianSpec {
            register,
            terms,
            label: label.into(),
        })
    }

    /// Wrap a raw Hermitian matrix over a single-site register as a spec,
    /// e.g. a random-matrix ensemble member.
    pub fn from_dense(
        register: SiteRegister,
        h: &DMatrix<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if register.num_sites() != 1 {
            return Err(Error::UnsupportedRegister(
                "raw dense Hamiltonians take a single-site register".into(),
            ));
        }
        let dev = hermiticity_deviation(h);
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let term = HamiltonianTerm::new(1.0, vec![LocalOperator::new(0, h.clone())])?;
        HamiltonianSpec::new(register, vec![term], label)
    }

    pub fn register(&self) -> &SiteRegister {
        &self.register
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Dense matrix of the full Hamiltonian, verified Hermitian.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.dense_matrix_capped(DENSE_MATRIX_CAP)
    }

    pub fn dense_matrix_capped(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        let n = self.register.total_dim();
        if n > cap {
            return Err(Error::SizeCap { dim: n, cap });
        }
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for term in &self.terms {
            accumulate_term(&self.register, term, &mut h);
        }
        let dev = hermiticity_deviation(&h);
        if dev > 1e-12 * h.iter().fold(1.0f64, |m, c| m.max(c.norm())) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(h)
    }
}

/// Add `coeff * embed(block)` into `h`, walking the complement odometer.
fn accumulate_term(register: &SiteRegister, term: &HamiltonianTerm, h: &mut DMatrix<Complex64>) {
    let coeff = Complex64::new(term.coefficient(), 0.0);
    let support = term.support();
    let block = term.block_matrix();
    let bdim = block.nrows();

    let mut offsets = vec![0usize; bdim];
    for (r, off) in offsets.iter_mut().enumerate() {
        let mut rem = r;
        for f in term.factors().iter().rev() {
            let d = f.dim();
            *off += (rem % d) * register.stride(f.site());
            rem /= d;
        }
    }

    let mut outer_dims = Vec::new();
    let mut outer_strides = Vec::new();
    for s in 0..register.num_sites() {
        if !support.contains(&s) {
            outer_dims.push(register.dim(s));
            outer_strides.push(register.stride(s));
        }
    }

    let mut digits = vec![0usize; outer_dims.len()];
    let mut base = 0usize;
    loop {
        for r in 0..bdim {
            for c in 0..bdim {
                let v = block[(r, c)];
                if v != Complex64::ZERO {
                    h[(base + offsets[r], base + offsets[c])] += coeff * v;
                }
            }
        }
        let mut k = outer_dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            base += outer_strides[k];
            if digits[k] < outer_dims[k] {
                break;
            }
            base -= outer_dims[k] * outer_strides[k];
            digits[k] = 0;
        }
    }
}

/// All-to-all Ising twisting Hamiltonian `(1/4) sum_{i,j} Z_i Z_j` on `l`
/// qubits: the distinct pairs carry coefficient 1/2, and the i = j diagonal
/// contributions form the constant `l/4 * identity`, kept as an explicit
/// scalar term (a pure global phase under evolution, invisible to any IPR).
pub fn build_oat(l: usize) -> Result<HamiltonianSpec> {
    if l < 2 {
        return Err(Error::Domain("twisting chain needs l >= 2".into()));
    }
    let register = SiteRegister::qubits(l);
    let mut terms = Vec::new();
    for i in 0..l {
        for j in (i + 1)..l {
            terms.push(HamiltonianTerm::new(
                0.5,
                vec![LocalOperator::pauli_z(i), LocalOperator::pauli_z(j)],
            )?);
        }
    }
    terms.push(HamiltonianTerm::scalar(l as f64 / 4.0));
    HamiltonianSpec::new(register, terms, "oat")
}

/// PXP chain with a transverse field:
/// `sum_i (P_{i-1} X_i P_{i+1} - h Z_i)`, projectors onto `|0>`.
/// Periodic boundaries wrap the projectors; open boundaries drop the missing
/// neighbor projector at the chain ends.
pub fn build_pxp(l: usize, h: f64, periodic: bool) -> Result<HamiltonianSpec> {
    if periodic && l < 3 {
        return Err(Error::Domain(
            "periodic PXP chain needs l >= 3".into(),
        ));
    }
    if l < 2 {
        return Err(Error::Domain("PXP chain needs l >= 2".into()));
    }
    let register = SiteRegister::qubits(l);
    let mut terms = Vec::new();
    for i in 0..l {
        let mut factors = Vec::new();
        if periodic {
            let left = (i + l - 1) % l;
            let right = (i + 1) % l;
            let mut sites = vec![
                (left, FactorKind::Projector),
                (i, FactorKind::PauliX),
                (right, FactorKind::Projector),
            ];
            sites.sort_by_key(|&(s, _)| s);
            for (s, kind) in sites {
                factors.push(kind.build(s));
            }
        } else {
            if i > 0 {
                factors.push(LocalOperator::projector0(i - 1));
            }
            factors.push(LocalOperator::pauli_x(i));
            if i + 1 < l {
                factors.push(LocalOperator::projector0(i + 1));
            }
        }
        terms.push(HamiltonianTerm::new(1.0, factors)?);
    }
    for i in 0..l {
        terms.push(HamiltonianTerm::new(-h, vec![LocalOperator::pauli_z(i)])?);
    }
    HamiltonianSpec::new(register, terms, "pxp")
}

enum FactorKind {
    Projector,
    PauliX,
}

impl FactorKind {
    fn build(&self, site: usize) -> LocalOperator {
        match self {
            FactorKind::Projector => LocalOperator::projector0(site),
            FactorKind::PauliX => LocalOperator::pauli_x(site),
        }
    }
}

/// Spin-1 AKLT chain with open boundaries and a uniform field:
/// `sum_bonds [ (1/2) S_i.S_j + (1/6)(S_i.S_j)^2 + 1/3 ] - (h/l) sum_i S^z_i`.
///
/// The biquadratic piece is expanded into nine products of Hermitian one-site
/// factors so that every term exponentiates to a unitary two-site gate:
/// `(S_i.S_j)^2 = sum_a (S^aS^a)_i (S^aS^a)_j
///  + sum_{a<b} 2 (T^{ab}_i T^{ab}_j - A^{ab}_i A^{ab}_j)` with
/// `T = (S^aS^b + S^bS^a)/2` and `A = (S^aS^b - S^bS^a)/(2i)`.
pub fn build_aklt(l: usize, h: f64) -> Result<HamiltonianSpec> {
    if l < 2 {
        return Err(Error::Domain("AKLT chain needs l >= 2".into()));
    }
    let register = SiteRegister::qudits(l, 3)?;
    let sx = LocalOperator::spin1_x(0);
    let sy = LocalOperator::spin1_y(0);
    let sz = LocalOperator::spin1_z(0);
    let spins = [sx.matrix().clone(), sy.matrix().clone(), sz.matrix().clone()];

    let mut terms = Vec::new();
    for i in 0..(l - 1) {
        let j = i + 1;
        for s in &spins {
            terms.push(HamiltonianTerm::new(
                0.5,
                vec![LocalOperator::new(i, s.clone()), LocalOperator::new(j, s.clone())],
            )?);
        }
        for s in &spins {
            let sq = s * s;
            terms.push(HamiltonianTerm::new(
                1.0 / 6.0,
                vec![LocalOperator::new(i, sq.clone()), LocalOperator::new(j, sq)],
            )?);
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let sym = (&spins[a] * &spins[b] + &spins[b] * &spins[a])
                * Complex64::new(0.5, 0.0);
            let asym = (&spins[a] * &spins[b] - &spins[b] * &spins[a])
                * Complex64::new(0.0, -0.5);
            terms.push(HamiltonianTerm::new(
                1.0 / 3.0,
                vec![LocalOperator::new(i, sym.clone()), LocalOperator::new(j, sym)],
            )?);
            terms.push(HamiltonianTerm::new(
                -1.0 / 3.0,
                vec![LocalOperator::new(i, asym.clone()), LocalOperator::new(j, asym)],
            )?);
        }
        terms.push(HamiltonianTerm::scalar(1.0 / 3.0));
    }
    for i in 0..l {
        terms.push(HamiltonianTerm::new(
            -h / l as f64,
            vec![LocalOperator::new(i, sz.matrix().clone())],
        )?);
    }
    HamiltonianSpec::new(register, terms, "aklt")
}

/// First-order product-formula circuit for `exp(-i H t)`: `n_steps`
/// repetitions of the per-term exponentials in the order the terms appear.
/// Each exponential is emitted as a dense unitary gate on the term's support
/// (constant terms become a phase gate on site 0).
pub fn trotter_circuit(spec: &HamiltonianSpec, t: f64, n_steps: usize) -> Result<CircuitPlan> {
    if n_steps == 0 {
        return Err(Error::Domain("n_steps must be >= 1".into()));
    }
    let tau = t / n_steps as f64;
    let mut step_gates: Vec<GateOp> = Vec::with_capacity(spec.terms().len());
    for term in spec.terms() {
        let support = term.support();
        if support.len() > 3 {
            return Err(Error::UnsupportedTerm(format!(
                "term support {} sites wide; product-formula gates are capped at 3",
                support.len()
            )));
        }
        let gate = if support.is_empty() {
            // Global phase carried on site 0.
            let d = spec.register().dim(0);
            let phase = Complex64::from_polar(1.0, -term.coefficient() * tau);
            let u = DMatrix::from_diagonal(&nalgebra::DVector::from_element(d, phase));
            GateOp::new(vec![0], u, vec![])?
        } else {
            let block = term.block_matrix();
            let mut u = hermitian_expm(&block, term.coefficient() * tau)?;
            let n = u.nrows();
            for (idx, v) in u.iter_mut().enumerate() {
                if v.norm() < GATE_SNAP_TOL {
                    *v = Complex64::ZERO;
                } else if idx % (n + 1) == 0 && (*v - Complex64::ONE).norm() < GATE_SNAP_TOL {
                    // Unit diagonal entries restored exactly: the kernels
                    // skip identity rows.
                    *v = Complex64::ONE;
                }
            }
            GateOp::new(support, u, vec![])?
        };
        step_gates.push(gate);
    }
    let mut gates = Vec::with_capacity(step_gates.len() * n_steps);
    for _ in 0..n_steps {
        gates.extend(step_gates.iter().cloned());
    }
    Ok(CircuitPlan::evolution(spec.register().clone(), gates))
}

/// Gate-count estimate `2^{m+1} N_t + m^2` for the eigenbasis estimator
/// built from a Trotterized evolution, with `N_t` the emitted gate count of
/// one full evolution. Documentation value only.
pub fn gate_count_estimate(spec: &HamiltonianSpec, m: u32, n_steps: usize) -> u64 {
    let n_t = (spec.terms().len() * n_steps) as u64;
    gate_count_formula(n_t, m)
}

/// The raw formula with `N_t` supplied directly.
pub fn gate_count_formula(n_t: u64, m: u32) -> u64 {
    2u64.pow(m + 1) * n_t + u64::from(m) * u64::from(m)
}

/// One-site cyclic shift permutation matrix of a uniform register, used to
/// check translation symmetry of periodic chains.
pub fn translation_matrix(register: &SiteRegister) -> Result<DMatrix<Complex64>> {
    let l = register.num_sites();
    let d = register.dim(0);
    for s in 0..l {
        if register.dim(s) != d {
            return Err(Error::DimensionMismatch(
                "translation needs a uniform register".into(),
            ));
        }
    }
    let n = register.total_dim();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..n {
        let digits = register.digits_of(col);
        let mut shifted = vec![0usize; l];
        for (s, &v) in digits.iter().enumerate() {
            shifted[(s + 1) % l] = v;
        }
        let row = register.index_of(&shifted)?;
        m[(row, col)] = Complex64::ONE;
    }
    Ok(m)
}

//! Dense statevector representation for mixed qubit/qudit registers and the
//! gate kernels used by every circuit in this crate.
//!
//! Site ordering convention: site 0 is the most significant mixed-radix digit
//! of a basis-state index. A register with local dimensions `[d0, d1, ..]`
//! indexes basis state `|v0, v1, ..>` at `v0*d1*d2*.. + v1*d2*.. + ..`. All
//! circuits and index arithmetic in this crate follow this one convention.

mod dense;
mod gate;
mod sparse;

pub use dense::embed_full_matrix;
pub use gate::{Control, GateOp};
pub use sparse::SparseState;

pub(crate) use dense::qft_gate_sequence;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Constructing a state checks normalization against this tolerance, and
/// readout paths re-check it: drift beyond this raises a numerical-drift
/// error instead of silently renormalizing.
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// Gate matrices must satisfy `max |U^dag U - 1|  <= UNITARITY_TOL`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A register of sites with (possibly mixed) local dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteRegister {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl SiteRegister {
    /// Build a register from per-site local dimensions, site 0 leftmost.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("register has no sites".into()));
        }
        for (site, &d) in dims.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidBasisIndex {
                    site,
                    digit: 0,
                    dim: d,
                });
            }
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= 1usize << 62)
                .ok_or_else(|| {
                    Error::DimensionMismatch("register dimension exceeds 2^62".into())
                })?;
        }
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(SiteRegister {
            dims,
            strides,
            total_dim: total,
        })
    }

    /// Register of `n` qubits.
    pub fn qubits(n: usize) -> Self {
        SiteRegister::new(vec![2; n]).expect("qubit register")
    }

    /// Register of `n` qudits with uniform local dimension `d`.
    pub fn qudits(n: usize, d: usize) -> Result<Self> {
        SiteRegister::new(vec![d; n])
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn stride(&self, site: usize) -> usize {
        self.strides[site]
    }

    /// Concatenate two registers, `self` occupying the leading sites.
    pub fn concat(&self, other: &SiteRegister) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SiteRegister::new(dims)
    }

    /// Mixed-radix index of a digit string.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} digits supplied for {} sites",
                digits.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0usize;
        for (site, (&v, &d)) in digits.iter().zip(&self.dims).enumerate() {
            if v >= d {
                return Err(Error::InvalidBasisIndex {
                    site,
                    digit: v,
                    dim: d,
                });
            }
            idx += v * self.strides[site];
        }
        Ok(idx)
    }

    /// Digit of `index` at `site`.
    pub fn digit_at(&self, index: usize, site: usize) -> usize {
        (index / self.strides[site]) % self.dims[site]
    }

    /// All digits of `index`, site 0 first.
    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        (0..self.dims.len())
            .map(|s| self.digit_at(index, s))
            .collect()
    }

    fn check_sites(&self, sites: &[usize]) -> Result<()> {
        for &s in sites {
            if s >= self.num_sites() {
                return Err(Error::DimensionMismatch(format!(
                    "site {} out of range for {}-site register",
                    s,
                    self.num_sites()
                )));
            }
        }
        Ok(())
    }
}

/// A pure state over a [`SiteRegister`], stored as a dense amplitude vector.
#[derive(Debug, Clone)]
pub struct QuditState {
    register: SiteRegister,
    amps: Vec<Complex64>,
}

impl QuditState {
    /// The basis state `|digits>`.
    pub fn basis_state(register: SiteRegister, digits: &[usize]) -> Result<Self> {
        let idx = register.index_of(digits)?;
        let mut amps = vec![Complex64::ZERO; register.total_dim()];
        amps[idx] = Complex64::ONE;
        Ok(QuditState { register, amps })
    }

    /// Wrap an amplitude vector; must already be normalized.
    pub fn from_amplitudes(register: SiteRegister, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != register.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for register of dimension {}",
                amps.len(),
                register.total_dim()
            )));
        }
        let state = QuditState { register, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    pub fn register(&self) -> &SiteRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Raise a numerical-drift error if the norm has wandered off 1.
    pub fn check_norm(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_TOL {
            return Err(Error::NumericalDrift {
                norm,
                tol: NORM_DRIFT_TOL,
            });
        }
        Ok(())
    }

    /// Kronecker product `self (x) other`; `self` occupies the leading sites.
    pub fn tensor(&self, other: &QuditState) -> Result<QuditState> {
        let register = self.register.concat(&other.register)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(QuditState { register, amps })
    }

    pub fn inner(&self, other: &QuditState) -> Result<Complex64> {
        if self.register.total_dim() != other.register.total_dim() {
            return Err(Error::DimensionMismatch(
                "inner product of states with different dimensions".into(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply a (controlled) unitary gate in place.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        dense::apply_gate(&self.register, &mut self.amps, gate)
    }

    /// Apply the two-qudit SUM gate: `|a>|b> -> |a>|a + b mod d>`.
    /// For d = 2 this is exactly the CNOT gate.
    pub fn apply_sum_d(&mut self, control_site: usize, target_site: usize) -> Result<()> {
        self.register.check_sites(&[control_site, target_site])?;
        let d = self.register.dim(control_site);
        if self.register.dim(target_site) != d {
            return Err(Error::GateShape(format!(
                "SUM gate requires equal local dims, got {} and {}",
                d,
                self.register.dim(target_site)
            )));
        }
        let gate = GateOp::sum_d(control_site, target_site, d)?;
        self.apply_gate(&gate)
    }

    /// Conditionally cycle `q` site blocks: when the control qubit is 1,
    /// digits of block k move to block k+1 (mod q); when 0, identity.
    pub fn apply_block_cycle(&mut self, control_site: usize, blocks: &[Vec<usize>]) -> Result<()> {
        dense::apply_block_cycle(&self.register, &mut self.amps, control_site, blocks)
    }

    /// Quantum Fourier transform on the given qubit sites:
    /// `|x> -> 2^{-m/2} sum_k exp(i 2 pi x k / 2^m) |k>`.
    pub fn apply_qft(&mut self, sites: &[usize]) -> Result<()> {
        for gate in dense::qft_gate_sequence(&self.register, sites)? {
            self.apply_gate(&gate)?;
        }
        Ok(())
    }

    /// Probability that measuring `sites` yields `digits`.
    pub fn outcome_probability(&self, sites: &[usize], digits: &[usize]) -> Result<f64> {
        self.check_norm()?;
        if sites.len() != digits.len() {
            return Err(Error::DimensionMismatch(
                "sites and digits lengths differ".into(),
            ));
        }
        self.register.check_sites(sites)?;
        for (&s, &v) in sites.iter().zip(digits) {
            if v >= self.register.dim(s) {
                return Err(Error::InvalidBasisIndex {
                    site: s,
                    digit: v,
                    dim: self.register.dim(s),
                });
            }
        }
        let mut p = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            if sites
                .iter()
                .zip(digits)
                .all(|(&s, &v)| self.register.digit_at(idx, s) == v)
            {
                p += a.norm_sqr();
            }
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Marginal distribution over joint outcomes at `sites`, indexed
    /// mixed-radix in the order given.
    pub fn marginal_distribution(&self, sites: &[usize]) -> Result<Vec<f64>> {
        self.check_norm()?;
        self.register.check_sites(sites)?;
        let site_dims: Vec<usize> = sites.iter().map(|&s| self.register.dim(s)).collect();
        let k: usize = site_dims.iter().product();
        let mut out = vec![0.0; k];
        for (idx, a) in self.amps.iter().enumerate() {
            let mut o = 0usize;
            for (&s, &d) in sites.iter().zip(&site_dims) {
                o = o * d + self.register.digit_at(idx, s);
            }
            out[o] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Draw `n_shots` measurement outcomes at `sites`, reproducibly from
    /// `seed`.
    pub fn sample_outcomes(
        &self,
        sites: &[usize],
        n_shots: u64,
        seed: u64,
    ) -> Result<OutcomeCounts> {
        if n_shots == 0 {
            return Err(Error::Domain("n_shots must be >= 1".into()));
        }
        let probs = self.marginal_distribution(sites)?;
        let site_dims: Vec<usize> = sites.iter().map(|&s| self.register.dim(s)).collect();
        Ok(sample_multinomial(&probs, site_dims, n_shots, seed))
    }
}

/// Shot counts over joint outcomes at a set of sites.
#[derive(Debug, Clone)]
pub struct OutcomeCounts {
    site_dims: Vec<usize>,
    counts: Vec<u64>,
}

impl OutcomeCounts {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count for one joint outcome, digits in site order.
    pub fn count_of(&self, digits: &[usize]) -> u64 {
        let mut o = 0usize;
        for (&v, &d) in digits.iter().zip(&self.site_dims) {
            debug_assert!(v < d);
            o = o * d + v;
        }
        self.counts[o]
    }
}

pub(crate) fn sample_multinomial(
    probs: &[f64],
    site_dims: Vec<usize>,
    n_shots: u64,
    seed: u64,
) -> OutcomeCounts {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..n_shots {
        let r: f64 = rng.random::<f64>() * total;
        let k = cumulative.partition_point(|&c| c < r).min(probs.len() - 1);
        counts[k] += 1;
    }
    OutcomeCounts { site_dims, counts }
}

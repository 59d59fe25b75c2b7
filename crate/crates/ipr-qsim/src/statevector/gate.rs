use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::UNITARITY_TOL;

/// A computational-basis control: the gate acts only where `site` carries
/// `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub site: usize,
    pub value: usize,
}

/// A dense unitary on an ordered list of target sites, optionally controlled
/// on computational-basis values of other sites.
///
/// The unitary is indexed mixed-radix over the target sites in the order
/// given, first target most significant. The matrix is shared so that plans
/// repeating one gate stay cheap to build.
#[derive(Debug, Clone)]
pub struct GateOp {
    targets: Vec<usize>,
    controls: Vec<Control>,
    unitary: Arc<DMatrix<Complex64>>,
}

impl GateOp {
    /// Build a gate, verifying unitarity and site disjointness.
    pub fn new(
        targets: Vec<usize>,
        unitary: DMatrix<Complex64>,
        controls: Vec<Control>,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::GateShape("gate has no target sites".into()));
        }
        if unitary.nrows() != unitary.ncols() {
            return Err(Error::GateShape(format!(
                "gate matrix is {}x{}, not square",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let mut all_sites: Vec<usize> = targets.clone();
        all_sites.extend(controls.iter().map(|c| c.site));
        let mut sorted = all_sites.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != all_sites.len() {
            return Err(Error::GateShape(
                "target and control sites must be distinct".into(),
            ));
        }
        let dev = unitarity_deviation(&unitary);
        if dev > UNITARITY_TOL {
            return Err(Error::GateShape(format!(
                "matrix is not unitary (max |U^dag U - 1| = {dev:e})"
            )));
        }
        Ok(GateOp {
            targets,
            controls,
            unitary: Arc::new(unitary),
        })
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn unitary(&self) -> &DMatrix<Complex64> {
        &self.unitary
    }

    /// Dimension of the target block.
    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Same unitary with an additional control attached.
    pub fn controlled(mut self, site: usize, value: usize) -> Result<Self> {
        if self.targets.contains(&site) || self.controls.iter().any(|c| c.site == site) {
            return Err(Error::GateShape(format!(
                "control site {site} already used by the gate"
            )));
        }
        self.controls.push(Control { site, value });
        Ok(self)
    }

    /// The inverse gate (conjugate transpose, same sites).
    pub fn dagger(&self) -> Self {
        GateOp {
            targets: self.targets.clone(),
            controls: self.controls.clone(),
            unitary: Arc::new(self.unitary.adjoint()),
        }
    }

    /// The same gate with every site index shifted by `offset`; the matrix
    /// allocation is shared with the original.
    pub fn shift_sites(&self, offset: usize) -> Self {
        GateOp {
            targets: self.targets.iter().map(|&s| s + offset).collect(),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    site: c.site + offset,
                    value: c.value,
                })
                .collect(),
            unitary: Arc::clone(&self.unitary),
        }
    }

    /// Hadamard on one qubit site.
    pub fn hadamard(site: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
            ],
        );
        GateOp {
            targets: vec![site],
            controls: vec![],
            unitary: Arc::new(u),
        }
    }

    /// Pauli X on one qubit site.
    pub fn pauli_x(site: usize) -> Self {
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ],
        );
        GateOp {
            targets: vec![site],
            controls: vec![],
            unitary: Arc::new(u),
        }
    }

    /// diag(1, e^{i phi}) on one qubit site.
    pub fn phase(site: usize, phi: f64) -> Self {
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::ONE,
            Complex64::from_polar(1.0, phi),
        ]));
        GateOp {
            targets: vec![site],
            controls: vec![],
            unitary: Arc::new(u),
        }
    }

    /// CNOT as an X gate controlled on `control = 1`.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        GateOp::pauli_x(target).controlled(control, 1)
    }

    /// The two-qudit SUM gate `|a>|b> -> |a>|a + b mod d>` as a d^2 x d^2
    /// permutation on sites `[control_site, target_site]`.
    pub fn sum_d(control_site: usize, target_site: usize, d: usize) -> Result<Self> {
        let n = d * d;
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        for a in 0..d {
            for b in 0..d {
                let col = a * d + b;
                let row = a * d + (a + b) % d;
                u[(row, col)] = Complex64::ONE;
            }
        }
        GateOp::new(vec![control_site, target_site], u, vec![])
    }

    /// Swap two sites of equal local dimension `d`.
    pub fn swap(a: usize, b: usize, d: usize) -> Result<Self> {
        let n = d * d;
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        for x in 0..d {
            for y in 0..d {
                u[(y * d + x, x * d + y)] = Complex64::ONE;
            }
        }
        GateOp::new(vec![a, b], u, vec![])
    }

    /// R_k phase rotation used in the Fourier transform circuit:
    /// diag(1, e^{2 pi i / 2^k}).
    pub fn fourier_phase(site: usize, k: u32) -> Self {
        GateOp::phase(site, 2.0 * PI / 2f64.powi(k as i32))
    }
}

pub(crate) fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            // (U^dag U)[i,j] = sum_k conj(U[k,i]) U[k,j]
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += u[(k, i)].conj() * u[(k, j)];
            }
            let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((acc - expect).norm());
        }
    }
    dev
}

//! Exact-diagonalization ground truth: spectra with degeneracy grouping,
//! direct inverse participation ratios and participation entropies,
//! survival-probability time averages, spectral gaps, and the
//! thermalization diagnostic used by the PXP sweep.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianSpec;
use crate::statevector::QuditState;

/// Hermiticity tolerance on inputs to the eigensolver.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues, eigenvectors, and degeneracy grouping of a dense Hermitian
/// matrix. Eigenvalues are ascending; eigenvector `i` is column `i`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    groups: Vec<Vec<usize>>,
    deg_tol: f64,
}

pub fn hermiticity_deviation(h: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..h.nrows() {
        for j in 0..=i {
            dev = dev.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Diagonalize a Hermitian matrix, grouping eigenvalues whose consecutive
/// spacing is at most `deg_tol` into degenerate levels. `deg_tol = None`
/// defaults to `1e-8 * ||H||` (spectral norm).
pub fn eigendecompose(h: &DMatrix<Complex64>, deg_tol: Option<f64>) -> Result<Spectrum> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let dev = hermiticity_deviation(h);
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Symmetrize to scrub roundoff before handing to the solver.
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();

    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let spectral_norm = eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()));
    let deg_tol = deg_tol.unwrap_or(1e-8 * spectral_norm.max(1e-300));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize];
    for i in 1..n {
        if eigenvalues[i] - eigenvalues[i - 1] <= deg_tol {
            current.push(i);
        } else {
            groups.push(std::mem::take(&mut current));
            current = vec![i];
        }
    }
    groups.push(current);

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        groups,
        deg_tol,
    })
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<Complex64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// Degenerate level groups: index sets partitioning `0..len()`.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn deg_tol(&self) -> f64 {
        self.deg_tol
    }

    pub fn has_degeneracy(&self) -> bool {
        self.groups.iter().any(|g| g.len() > 1)
    }

    /// Mean energy of each degenerate group, ascending.
    pub fn group_energies(&self) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / g.len() as f64)
            .collect()
    }

    /// Largest |eigenvalue|.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &e| acc.max(e.abs()))
    }

    /// Spectral spread `e_max - e_min`.
    pub fn width(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Expansion coefficients `c_i = <eps_i|psi>`.
    pub fn coefficients(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} does not match spectrum dimension {}",
                amplitudes.len(),
                self.len()
            )));
        }
        let v = DVector::from_column_slice(amplitudes);
        let c = self.eigenvectors.adjoint() * v;
        Ok(c.iter().copied().collect())
    }

    /// Group populations `p_j = <psi|P_j|psi>`.
    pub fn group_populations(&self, amplitudes: &[Complex64]) -> Result<Vec<f64>> {
        let c = self.coefficients(amplitudes)?;
        Ok(self
            .groups
            .iter()
            .map(|g| g.iter().map(|&i| c[i].norm_sqr()).sum())
            .collect())
    }
}

/// Minimum gap between consecutive distinct (degeneracy-grouped) levels.
pub fn min_gap(spectrum: &Spectrum) -> Result<f64> {
    let energies = spectrum.group_energies();
    if energies.len() < 2 {
        return Err(Error::NoGap);
    }
    Ok(energies
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min))
}

/// `exp(-i H t)` of a Hermitian matrix via its eigendecomposition.
pub fn hermitian_expm(h: &DMatrix<Complex64>, t: f64) -> Result<DMatrix<Complex64>> {
    let spec = eigendecompose(h, None)?;
    let n = spec.len();
    let v = spec.eigenvectors();
    let phases: Vec<Complex64> = spec
        .eigenvalues()
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    // V diag(phases) V^dag
    let mut scaled = v.clone();
    for (j, col) in phases.iter().enumerate().take(n) {
        let mut column = scaled.column_mut(j);
        column *= *col;
    }
    Ok(&scaled * v.adjoint())
}

/// Operator 2-norm (largest singular value) via the Hermitian
/// eigendecomposition of `M^dag M`.
pub fn operator_norm(m: &DMatrix<Complex64>) -> Result<f64> {
    let gram = m.adjoint() * m;
    let spec = eigendecompose(&gram, None)?;
    let lam = spec.eigenvalues().last().copied().unwrap_or(0.0);
    Ok(lam.max(0.0).sqrt())
}

/// An IPR measurement: the moment `I_q`, its participation entropy, and the
/// basis it refers to.
#[derive(Debug, Clone)]
pub struct IprReport {
    pub q: usize,
    pub value: f64,
    pub entropy: f64,
    pub basis_label: String,
}

/// Renyi participation entropy `S_q = log2(I_q) / (1 - q)`.
pub fn participation_entropy(value: f64, q: usize) -> Result<f64> {
    if value <= 0.0 {
        return Err(Error::Domain(format!(
            "participation entropy needs a positive moment, got {value}"
        )));
    }
    if q < 2 {
        return Err(Error::Domain("Renyi index q must be >= 2".into()));
    }
    Ok(value.log2() / (1.0 - q as f64))
}

fn check_normalized(amplitudes: &[Complex64]) -> Result<()> {
    let norm = amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Direct IPR `I_q = sum_i |c_i|^{2q}` of an amplitude vector in its own
/// basis.
pub fn ipr_direct(amplitudes: &[Complex64], q: usize) -> Result<IprReport> {
    if q < 2 {
        return Err(Error::Domain("Renyi index q must be >= 2".into()));
    }
    check_normalized(amplitudes)?;
    let value: f64 = amplitudes
        .iter()
        .map(|a| a.norm_sqr().powi(q as i32))
        .sum();
    Ok(IprReport {
        q,
        value,
        entropy: participation_entropy(value, q)?,
        basis_label: "computational".into(),
    })
}

/// IPR of a state in the eigenbasis of a spectrum. Degenerate spectra are
/// routed through the projector form [`ipr_degenerate`] automatically.
pub fn ipr_in_eigenbasis(
    amplitudes: &[Complex64],
    spectrum: &Spectrum,
    q: usize,
) -> Result<IprReport> {
    if spectrum.has_degeneracy() {
        return ipr_degenerate(amplitudes, spectrum, q);
    }
    check_normalized(amplitudes)?;
    let c = spectrum.coefficients(amplitudes)?;
    let mut report = ipr_direct(&c, q)?;
    report.basis_label = "eigenbasis".into();
    Ok(report)
}

/// Projector form of the eigenbasis IPR: `I_q = sum_j p_j^q` with
/// `p_j = <psi|P_j|psi>`. Reduces to [`ipr_in_eigenbasis`] when every level
/// is non-degenerate.
pub fn ipr_degenerate(
    amplitudes: &[Complex64],
    spectrum: &Spectrum,
    q: usize,
) -> Result<IprReport> {
    if q < 2 {
        return Err(Error::Domain("Renyi index q must be >= 2".into()));
    }
    check_normalized(amplitudes)?;
    let p = spectrum.group_populations(amplitudes)?;
    let value: f64 = p.iter().map(|&pj| pj.powi(q as i32)).sum();
    Ok(IprReport {
        q,
        value,
        entropy: participation_entropy(value.max(f64::MIN_POSITIVE), q)?,
        basis_label: "eigenbasis".into(),
    })
}

/// Uniform-grid time average of the survival probability
/// `|<psi0|exp(-iHt)|psi0>|^2`, evaluated in the eigenbasis. Converges to
/// `sum_j p_j^2` as `t_max` grows.
pub fn survival_average_numeric(
    amplitudes: &[Complex64],
    h: &DMatrix<Complex64>,
    t_max: f64,
    n_samples: usize,
) -> Result<f64> {
    if t_max <= 0.0 {
        return Err(Error::Domain("t_max must be positive".into()));
    }
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be >= 1".into()));
    }
    check_normalized(amplitudes)?;
    let spectrum = eigendecompose(h, None)?;
    let c = spectrum.coefficients(amplitudes)?;
    let weights: Vec<f64> = c.iter().map(|ci| ci.norm_sqr()).collect();
    let energies = spectrum.eigenvalues();
    let mut acc = 0.0;
    for k in 0..n_samples {
        // Midpoint grid avoids over-weighting the t = 0 sample.
        let t = (k as f64 + 0.5) * t_max / n_samples as f64;
        let amp: Complex64 = weights
            .iter()
            .zip(energies)
            .map(|(&w, &e)| Complex64::from_polar(w, -e * t))
            .sum();
        acc += amp.norm_sqr();
    }
    Ok(acc / n_samples as f64)
}

fn z_in_eigenbasis(
    spec: &HamiltonianSpec,
    site: usize,
    spectrum: &Spectrum,
) -> Result<DMatrix<Complex64>> {
    if spec.register().dim(site) != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Pauli-Z diagnostic expects a qubit at site {site}"
        )));
    }
    let n = spectrum.len();
    // Z on `site` is diagonal in the computational basis.
    let v = spectrum.eigenvectors();
    let mut zv = v.clone();
    for idx in 0..n {
        let z = if spec.register().digit_at(idx, site) == 0 {
            1.0
        } else {
            -1.0
        };
        for col in 0..n {
            zv[(idx, col)] *= Complex64::new(z, 0.0);
        }
    }
    Ok(v.adjoint() * zv)
}

/// Infinite-time (diagonal-ensemble) average of Pauli-Z on `site` for a
/// system started in `psi0`: `sum_j <psi|P_j Z P_j|psi>`.
pub fn long_time_average_z(
    spec: &HamiltonianSpec,
    site: usize,
    psi0: &QuditState,
) -> Result<f64> {
    if psi0.register() != spec.register() {
        return Err(Error::DimensionMismatch(
            "initial state register does not match Hamiltonian register".into(),
        ));
    }
    psi0.check_norm()?;
    let h = spec.dense_matrix()?;
    let spectrum = eigendecompose(&h, None)?;
    let z_eig = z_in_eigenbasis(spec, site, &spectrum)?;
    let c = spectrum.coefficients(psi0.amplitudes())?;
    let mut long_time = 0.0;
    for group in spectrum.groups() {
        let mut acc = Complex64::ZERO;
        for &a in group {
            for &b in group {
                acc += c[a].conj() * z_eig[(a, b)] * c[b];
            }
        }
        long_time += acc.re;
    }
    Ok(long_time)
}

/// Difference between the infinite-time (diagonal-ensemble) average of the
/// Pauli-Z operator on `site` and its canonical thermal value at the
/// temperature matching the initial state's energy.
pub fn delta_sigma_z(spec: &HamiltonianSpec, site: usize, psi0: &QuditState) -> Result<f64> {
    if psi0.register() != spec.register() {
        return Err(Error::DimensionMismatch(
            "initial state register does not match Hamiltonian register".into(),
        ));
    }
    psi0.check_norm()?;
    let h = spec.dense_matrix()?;
    let spectrum = eigendecompose(&h, None)?;
    let z_eig = z_in_eigenbasis(spec, site, &spectrum)?;
    let c = spectrum.coefficients(psi0.amplitudes())?;

    let mut long_time = 0.0;
    for group in spectrum.groups() {
        let mut acc = Complex64::ZERO;
        for &a in group {
            for &b in group {
                acc += c[a].conj() * z_eig[(a, b)] * c[b];
            }
        }
        long_time += acc.re;
    }

    // Thermal value at the energy-matched canonical temperature.
    let e0: f64 = c
        .iter()
        .zip(spectrum.eigenvalues())
        .map(|(ci, &e)| ci.norm_sqr() * e)
        .sum();
    let z_th = canonical_z(&spectrum, &z_eig, e0)?;

    Ok(long_time - z_th)
}

/// Canonical expectation of Z at inverse temperature beta chosen so the
/// canonical energy matches `e0`, found by bisection. E(beta) is strictly
/// decreasing, so [-beta_max, beta_max] brackets the root when `e0` sits
/// inside the attainable energy window.
fn canonical_z(spectrum: &Spectrum, z_eig: &DMatrix<Complex64>, e0: f64) -> Result<f64> {
    let energies = spectrum.eigenvalues();
    let scale = spectrum.spectral_norm().max(1e-12);
    let beta_max = 100.0 / scale;

    let thermal_energy = |beta: f64| -> f64 {
        // Shift so the largest weight is exp(0).
        let shift = energies
            .iter()
            .map(|&e| -beta * e)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut zsum = 0.0;
        let mut esum = 0.0;
        for &e in energies {
            let w = (-beta * e - shift).exp();
            zsum += w;
            esum += w * e;
        }
        esum / zsum
    };

    let (mut lo, mut hi) = (-beta_max, beta_max);
    let (e_lo, e_hi) = (thermal_energy(lo), thermal_energy(hi));
    if !(e_hi <= e0 && e0 <= e_lo) {
        return Err(Error::ThermalMatch(format!(
            "target energy {e0} outside attainable window [{e_hi}, {e_lo}] at |beta| <= {beta_max}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if thermal_energy(mid) >= e0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);

    let shift = energies
        .iter()
        .map(|&e| -beta * e)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut zsum = 0.0;
    let mut zval = 0.0;
    for (i, &e) in energies.iter().enumerate() {
        let w = (-beta * e - shift).exp();
        zsum += w;
        zval += w * z_eig[(i, i)].re;
    }
    Ok(zval / zsum)
}

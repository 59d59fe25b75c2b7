//! Seeded sampling of random states and Hermitian matrices, used by the
//! error-bound studies and the test suite.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::statevector::{QuditState, SiteRegister};

/// Haar-ish random pure state: i.i.d. complex Gaussian amplitudes,
/// normalized. Reproducible from the seed.
pub fn random_state(register: SiteRegister, seed: u64) -> Result<QuditState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut amps: Vec<Complex64> = (0..register.total_dim())
        .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    QuditState::from_amplitudes(register, amps)
}

/// GUE-sampled Hermitian matrix: `(G + G^dag) / 2` with i.i.d. standard
/// complex Gaussian entries of `G`.
pub fn random_hermitian(dim: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    });
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

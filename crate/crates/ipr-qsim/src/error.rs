use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by simulator kernels, Hamiltonian builders, the
/// diagonalization oracle, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis digit {digit} out of range for site {site} (local dim {dim})")]
    InvalidBasisIndex {
        site: usize,
        digit: usize,
        dim: usize,
    },

    #[error("gate shape error: {0}")]
    GateShape(String),

    #[error("block shape error: {0}")]
    BlockShape(String),

    #[error("state norm drifted to {norm} (|norm - 1| > {tol:e})")]
    NumericalDrift { norm: f64, tol: f64 },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix dimension {dim} exceeds cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),

    #[error("unsupported register: {0}")]
    UnsupportedRegister(String),

    #[error("matrix is not Hermitian (max |H - H^dag| element = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("spectrum has a single level group; minimum gap undefined")]
    NoGap,

    #[error("thermal energy matching failed: {0}")]
    ThermalMatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

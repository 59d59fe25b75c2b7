//! Statevector simulation of inverse-participation-ratio estimation circuits
//! on qubit and qudit registers, with exact-diagonalization cross-checks.
//!
//! The inverse participation ratio `I_q = sum_i |c_i|^{2q}` measures how much
//! a pure state spreads over a chosen basis: 1 on a single basis state, down
//! to `N^{1-q}` for a uniform superposition. This crate implements
//!
//! - a mixed-radix qudit statevector engine with strided gate kernels and a
//!   sparse engine for the wide but low-support estimator circuits
//!   ([`statevector`]),
//! - the ancilla-interference circuit measuring `I_q` in the computational
//!   basis (CNOT/SUM gates plus a controlled cyclic block permutation), its
//!   qudit generalization, and the phase-estimation-style circuit measuring
//!   `I_2` in the eigenbasis of a Hamiltonian through controlled powers of
//!   `exp(-iHt)` and a Fourier transform on the ancillas ([`circuits`]),
//! - spin-chain Hamiltonian builders (all-to-all ZZ twisting, the PXP model
//!   with a transverse field, the spin-1 AKLT chain with a field) and
//!   first-order product-formula circuits for their evolution
//!   ([`hamiltonians`]),
//! - a dense Hermitian exact-diagonalization oracle: direct IPRs,
//!   participation entropies, degeneracy-aware eigenbasis IPRs, survival
//!   probability averages, spectral gaps, and thermalization diagnostics
//!   ([`ed`]),
//! - a reproducible experiment harness emitting deterministic CSV sweeps
//!   ([`harness`]), driven by the `ipr-qsim` binary.
//!
//! Every estimator has an independent exact route next to it, and the error
//! bounds (`4^{-m} pi^2 / (Delta^2 t^2)` for the eigenbasis circuit,
//! `||H||^2 t^2 / (2 n_T)` for first-order Trotterization) are enforced in
//! the test suite rather than assumed.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod circuits;
pub mod ed;
pub mod error;
pub mod hamiltonians;
pub mod harness;
pub mod random;
pub mod statevector;

pub use error::{Error, Result};

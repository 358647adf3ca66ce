//! Decoherence-free subspaces (DFS) of qudit ensembles.
//!
//! States invariant under every collective unitary `U^{⊗n}`, `U ∈ SU(d)`,
//! keep the encoded superposition intact when one particle is lost. This
//! crate builds those subspaces, checks the invariance and the single-loss
//! immunity numerically, simulates the four-photon beam-splitter readout
//! and runs the trine-state key distribution sketch as a Monte Carlo.
//!
//! The crate is `no_std` (it needs `alloc`). IO, reports and the command
//! line live in the `dfs-cli` companion crate.
//!
//! Conventions used throughout:
//!
//! - sites are numbered from 1, and site 1 is the most significant digit of
//!   the computational basis index `i = Σ_k s_k d^{n-k}`;
//! - states are dense; Hilbert spaces larger than `2^20` are refused;
//! - every stochastic routine takes an explicit seed (or an RNG derived
//!   from one), there is no global RNG.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dfs;
mod error;
pub mod linalg;
pub mod lossrec;
pub mod photonic;
pub mod qcore;
pub mod qkd;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tolerance for exact-math checks (`‖·‖` residuals, fidelities).
pub const EXACT_TOL: f64 = 1e-10;

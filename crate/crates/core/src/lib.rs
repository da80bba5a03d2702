//! Spectral structure of the discrete-time quantum walk on the N-cycle.
//!
//! The walk is driven by a two-dimensional unitary coin in the
//! `(R, alpha, beta)` parameterization. This crate provides:
//!
//! - [`coin`]: coin parameters and the 2×2 coin matrix,
//! - [`operator`]: the step operator (structured and dense), state vectors
//!   and the position/wavenumber transform,
//! - [`spectrum`]: closed-form eigenphases and the degeneracy structure,
//! - [`eigensystem`]: closed-form eigenvectors, gauge choices for degenerate
//!   pairs, the symmetry operator and protected coin ratios,
//! - [`bloch`]: reduced coin states and Bloch-ball geometry,
//! - [`oracle`]: brute-force dense diagonalization used for verification,
//! - [`protected`]: evolution of protected eigenstates under a fluctuating bias,
//! - [`cli`]: the `qwalk` command-line frontend.

pub mod bloch;
pub mod cli;
pub mod coin;
pub mod eigensystem;
mod error;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod phase;
pub mod protected;
pub mod spectrum;

pub use num_complex::Complex64;

pub use bloch::{BlochVector, CoinDensity};
pub use coin::{CoinMatrix, CoinParams};
pub use eigensystem::{EigenBasis, GElements, GaugeChoice, GaugePolicy};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use operator::{Basis, StateVector, StepOperator};
pub use spectrum::{Band, DegeneracyReport, SpectralPoint};

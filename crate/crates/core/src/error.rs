use thiserror::Error;

use crate::spectrum::Band;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("lattice size mismatch: expected {expected} sites, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("state is in the {actual:?} basis, expected {expected:?}")]
    BasisMismatch {
        expected: crate::operator::Basis,
        actual: crate::operator::Basis,
    },

    #[error("wavenumber {k} out of range for N = {sites}")]
    IndexOutOfRange { k: usize, sites: usize },

    #[error("dense realization needs N <= {limit}, got N = {sites}")]
    DenseLimit { sites: usize, limit: usize },

    #[error("eigenvalue at k = {k}, z = {band} is paired with k' = {partner}; use the degenerate-pair construction")]
    DegeneratePair { k: usize, partner: usize, band: Band },

    #[error("({k}, {k_prime}) is not a conjugate wavenumber pair")]
    NotConjugatePair { k: usize, k_prime: usize },

    #[error("gauge weight s1 = {s1} outside (0, {s_max})")]
    GaugeOutOfRange { s1: f64, s_max: f64 },

    #[error("R = 1 has a diagonal coin; eigenvectors are pure coin states (use the full eigenbasis)")]
    DiagonalCoin,

    #[error("k = {k} does not carry a unique eigenvalue")]
    NotUnique { k: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// A closed-form identity failed its numerical self-check.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

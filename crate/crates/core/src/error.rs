use thiserror::Error;

/// Errors raised while constructing or analysing two-qubit states.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized: squared norm {norm2} deviates from 1 by more than {tolerance}")]
    Normalization { norm2: f64, tolerance: f64 },

    #[error("parameter {name} = {value} outside its valid range [{min}, {max}]")]
    Range {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("X-state parameters are not positive semidefinite: {0}")]
    Positivity(String),

    #[error("ensemble weights sum to {sum}, expected 1")]
    Weight { sum: f64 },

    #[error("density matrix violates the {invariant} invariant (deviation {deviation:e})")]
    Validation {
        invariant: Invariant,
        deviation: f64,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("sinisterness paths disagree: det(c) = {det_c}, -16 det(G) = {det_g}")]
    PathDisagreement { det_c: f64, det_g: f64 },

    #[error("chirality undefined: smallest singular value {smallest:e} below threshold")]
    ChiralityUndefined { smallest: f64 },

    #[error("eigen-system is degenerate or rank deficient: {0}")]
    Degeneracy(String),

    #[error("invalid vertex indices ({0}, {1}, {2}): must be distinct and below 4")]
    Index(usize, usize, usize),

    #[error("ensemble has {0} terms; at most 4 are supported")]
    Cardinality(usize),

    #[error("perturbation constraint violated: {0}")]
    Constraint(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

/// Density-matrix invariant checked by [`crate::DensityMatrix::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
    Finiteness,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Invariant::Hermiticity => "hermiticity",
            Invariant::Trace => "unit-trace",
            Invariant::Positivity => "positive-semidefinite",
            Invariant::Finiteness => "finite-entries",
        };
        f.write_str(name)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

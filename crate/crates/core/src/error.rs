use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Validation failures are kept as distinct variants so that callers (and the
/// CLI) can name the exact invariant that was violated.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongDimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("entry grid has {got} elements, expected {expected} for a {rows}x{cols} matrix")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("matrix entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error(
        "matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) \
         differ by {deviation:e} (tolerance {tolerance:e})"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("density matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("qubit count {n} out of range (expected {min}..={max})")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    #[error("kept qubit indices ({a},{b}) invalid for {n} qubits: {reason}")]
    BadKeepPair {
        a: usize,
        b: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("mixing probability {p} outside [0,1]")]
    ProbabilityOutOfRange { p: f64 },

    #[error("failed to parse density file: {0}")]
    Parse(String),

    #[error("density file declares dim {dim}, expected 4")]
    BadFileDimension { dim: usize },

    #[error("invalid parameter range: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type. Every fallible operation returns [`Result`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation produced a non-finite value instead of failing earlier.
    #[error("overflow or non-finite result: {0}")]
    Overflow(String),

    /// Two fields (or a field and an operator) disagree on their grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Requested frequency content does not fit inside the grid's Nyquist range.
    #[error("frequency support overflows the grid: {0}")]
    SupportOverflow(String),

    /// A declared block range misses non-negligible blocks.
    #[error("incomplete lattice range: boundary block {block:?} carries relative mass {mass:.3e}")]
    IncompleteLatticeRange { block: Vec<i64>, mass: f64 },

    /// Enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    /// A resonant shell contains no lattice point.
    #[error("empty resonant shell at j = {0}")]
    EmptyShell(u32),

    /// Quadrature failed to converge to the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// Invalid experiment or operation configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

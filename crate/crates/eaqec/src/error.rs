use thiserror::Error;

/// Errors reported by code construction, decoding and fidelity routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operands or inputs have incompatible dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A code file or generator string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Generators or rows are linearly dependent where independence is required.
    #[error("rank error: {0}")]
    Rank(String),

    /// A structural precondition failed (commutation, pairing, ebit counts).
    #[error("structure error: {0}")]
    Structure(String),

    /// The requested computation exceeds a documented size ceiling.
    #[error("capability limit: {0}")]
    Capability(String),

    /// An internal invariant was violated; indicates a bug or invalid input set.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix where an invertible one was required")]
    Singular,

    #[error("lattice is not of full rank {expected} (rank {got})")]
    NotFullRank { expected: usize, got: usize },

    #[error("element is a zero divisor or zero where a unit was required")]
    NotInvertible,

    #[error("lattice is not closed under multiplication (not an order)")]
    NotARing,

    #[error("could not factor {0} within the configured effort")]
    FactoringFailure(String),

    #[error("prime {0} exceeds the supported word size")]
    PrimeTooLarge(String),

    #[error("ideals belong to different algebras")]
    AlgebraMismatch,

    #[error("{0}")]
    Precondition(String),

    #[error("search exceeded the configured bound: {0}")]
    SearchBound(String),
}

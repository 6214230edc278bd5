//! Exact rational scalars, dense polynomials and small dense matrices.
//!
//! Everything downstream is built on these three types; nothing here ever
//! touches floating point.

mod dense;
mod polynomial;
mod scalar;

pub use dense::DenseMatrix;
pub use polynomial::Polynomial;
pub use scalar::{format_scalar, int, parse_scalar, ratio, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial does not vanish at the divisor root (remainder {remainder})")]
    NonzeroRemainder { remainder: String },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot parse exact scalar from {0:?}")]
    BadScalar(String),
}

//! Dense exact linear algebra over [`Scalar`](crate::Scalar).

mod eigen;
mod matrix;
mod poly;

use thiserror::Error;

use crate::scalar::ScalarError;

pub use eigen::{eigen_quadratic, Spectrum};
pub use matrix::{FieldJson, Matrix, MatrixJson, RankKernel};
pub use poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix has entries outside the reals")]
    NotReal,
    #[error("invalid matrix: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

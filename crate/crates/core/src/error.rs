use thiserror::Error;

use crate::classify::ClassifyError;
use crate::field::FieldError;
use crate::golden::RingError;
use crate::group::GroupError;
use crate::matrix::MatrixError;
use crate::star::StarError;

/// Crate-level error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

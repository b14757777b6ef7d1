use thiserror::Error;

use crate::lattice::LatticeError;
use crate::ttm::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid twisted toric data:\n{0}")]
    InvalidSpec(ValidationReport),
    /// The request is outside the hypotheses under which the invariant is known.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix {0} is not in SL2(Z)")]
    NotSl2(String),
    #[error("automorphism does not commute with the monodromy image {0}")]
    NotCommuting(String),
    /// A coboundary left the allowed subgroup of a target cell.
    #[error("coefficient closure fails at {cell}: {detail}")]
    Closure { cell: String, detail: String },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("bilinear form is not symmetric: {0}")]
    Asymmetric(String),
    #[error("invalid corner index {index} for a necklace of length {len}")]
    InvalidCorner { index: usize, len: usize },
    #[error("invalid necklace: {0}")]
    InvalidNecklace(String),
}

impl Error {
    /// Whether the failure reflects an unsupported request rather than bad data.
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

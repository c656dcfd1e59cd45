use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not balanced at face {face}")]
    Unbalanced { face: String },
    #[error("non-integral weight {weight} at face {face}")]
    NonIntegral { face: String, weight: String },
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("image cones overlap and would need a refinement: {0}")]
    RefinementRequired(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no closed-form multiplicity for a type classified as {0}")]
    NoClosedForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;

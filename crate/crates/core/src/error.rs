use thiserror::Error;

use crate::field::Field;
use crate::images::ImageWitness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("evaluation point has {found} arguments but the polynomial uses {expected} variables")]
    Arity { expected: usize, found: usize },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("field too small: {0}")]
    FieldTooSmall(String),

    #[error("polynomial is an identity of M_{n}")]
    Identity { n: usize },

    #[error("polynomial is central on M_{n}")]
    Central { n: usize },

    #[error("search failed after {trials} trials: {what}")]
    SearchFailure { what: String, trials: usize },

    #[error(
        "no rational-split witness found after {trials} trials (existence is only guaranteed over the algebraic closure)"
    )]
    SpectrumSearch {
        trials: usize,
        /// Smallest maximal eigenvalue multiplicity seen, with the candidate.
        best: Option<(usize, Box<ImageWitness>)>,
    },

    #[error("enumeration of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

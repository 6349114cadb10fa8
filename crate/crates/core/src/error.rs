use thiserror::Error;

use crate::chain_term::ChainError;
use crate::formula::ParseError;
use crate::ordinal::OrdinalError;
use crate::semigroup::SemigroupError;
use crate::theory::TheoryError;
use crate::tree::TreeError;
use crate::uniformize::UniformizeError;

/// Any error the crate reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Formula(#[from] ParseError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Uniformize(#[from] UniformizeError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Whether the computation ran out of budget rather than hitting bad
    /// input.
    pub fn is_budget(&self) -> bool {
        let theory = match self {
            Error::Theory(e) => Some(e),
            Error::Ordinal(OrdinalError::Theory(e)) => Some(e),
            Error::Tree(TreeError::Theory(e)) => Some(e),
            Error::Uniformize(UniformizeError::Theory(e)) => Some(e),
            Error::Uniformize(UniformizeError::Tree(TreeError::Theory(e))) => Some(e),
            _ => None,
        };
        matches!(theory, Some(TheoryError::Budget(_)))
    }
}

use crate::geom::Space;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid group element: {0}")]
    InvalidGroup(String),

    #[error("measure lies outside the domain of `{functional}`")]
    OutsideDomain { functional: String },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("empty sample")]
    EmptySample,

    #[error("symmetrized measure is inside the domain of `{functional}`; functional and group do not match")]
    GroupFunctionalMismatch { functional: String },

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_space(expected: Space, found: Space) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { expected, found })
    }
}

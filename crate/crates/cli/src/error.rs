use dirbreak_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for bad input, 3 when the measure lies outside the functional's domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::OutsideDomain { .. } | Error::GroupFunctionalMismatch { .. }) => {
                3
            }
            CliError::Core(Error::BoundViolated(_)) => 1,
            _ => 2,
        }
    }
}

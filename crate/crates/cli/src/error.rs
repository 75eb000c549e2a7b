use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical consistency failure: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<qbm_core::Error> for CliError {
    fn from(e: qbm_core::Error) -> Self {
        use qbm_core::Error as E;
        match e {
            E::Domain { .. } => CliError::Config(e.to_string()),
            E::UnsupportedRegime(_) | E::UnsupportedObservable(_) | E::Divergent(_) => {
                CliError::Unsupported(e.to_string())
            }
            E::Consistency(_) => CliError::Consistency(e.to_string()),
        }
    }
}

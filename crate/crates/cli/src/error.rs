use std::path::PathBuf;

use thiserror::Error;

/// Exit code for bad flags, bad config files, or unusable output locations.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for a numerical failure during a computation.
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Usage(_) | CliError::Output { .. } => EXIT_USAGE,
        }
    }

    pub(crate) fn output(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        CliError::Output {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

impl From<fgan::Error> for CliError {
    fn from(e: fgan::Error) -> Self {
        use fgan::Error as E;
        match e {
            E::Numerical(_) | E::NonFiniteGradient { .. } | E::NonFiniteLoss { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::Domain { .. } | E::Dimension { .. } | E::Config(_) | E::Parse(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

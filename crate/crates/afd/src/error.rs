use afd_core::AfdError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const CHECK_FAILED: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("signal has zero energy")]
    ZeroSignal,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("numerical degeneracy: {0}")]
    Numerical(AfdError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => exit::CHECK_FAILED,
            CliError::Numerical(_) => exit::NUMERICAL,
            _ => exit::INPUT,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<AfdError> for CliError {
    fn from(e: AfdError) -> Self {
        match e {
            AfdError::ZeroResidual => CliError::ZeroSignal,
            AfdError::InvalidGrid(_)
            | AfdError::NonRealInput(_)
            | AfdError::OutsideDisc { .. }
            | AfdError::TailEnergy(_)
            | AfdError::InvalidArgument(_) => CliError::Parse(e.to_string()),
            AfdError::NearZeroModulus(_)
            | AfdError::UnresolvedPhase(_)
            | AfdError::DegenerateModulus { .. }
            | AfdError::DegenerateGram(_) => CliError::Numerical(e),
        }
    }
}

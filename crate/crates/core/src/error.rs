use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dense realization or system size exceeded its configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An operator assembly produced an internally inconsistent result.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A scenario configuration could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    /// A master-equation integration left its validity envelope.
    #[error("integration failed: {0}")]
    Integration(String),

    /// A series never crossed the requested threshold.
    #[error("no crossing: {0}")]
    NoCrossing(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Capacity(_) => 3,
            _ => 1,
        }
    }
}

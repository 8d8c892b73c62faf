//! CLI error type with the exit-code contract: 0 success, 2 configuration
//! problems, 3 invariant or verification failures, 4 capacity or boundary
//! overruns.

use std::fmt;

use walk_core::WalkError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    UnknownPreset(String),
    InvariantBreach(String),
    VerificationFailed(String),
    Engine(WalkError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::UnknownPreset(_) => 2,
            CliError::InvariantBreach(_) | CliError::VerificationFailed(_) => 3,
            CliError::Engine(WalkError::BoundaryCrossing { .. })
            | CliError::Engine(WalkError::CapacityExceeded { .. }) => 4,
            CliError::Engine(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::UnknownPreset(name) => write!(f, "unknown preset '{name}'"),
            CliError::InvariantBreach(msg) => write!(f, "invariant breach: {msg}"),
            CliError::VerificationFailed(msg) => write!(f, "verification failed: {msg}"),
            CliError::Engine(err) => write!(f, "{err}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<WalkError> for CliError {
    fn from(err: WalkError) -> Self {
        CliError::Engine(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

//! Experiment harness for the order-finding testbed: argument parsing, the
//! five subcommands, CSV emission, and the text formats used to reproduce
//! failing cases. All randomness is seeded; a command run twice with the
//! same flags produces byte-identical output.

pub mod cli;
pub mod commands;
pub mod stats;
pub mod textio;

/// Harness-level failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an invalid experiment configuration (exit code 2).
    Config(String),
    /// An oracle or adversary invariant broke mid-experiment (exit code 3).
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<orderlab_core::Error> for CliError {
    fn from(e: orderlab_core::Error) -> Self {
        match e {
            orderlab_core::Error::Inconsistent(msg) => CliError::Internal(msg.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Internal("x".into()).exit_code(), 3);
        assert_eq!(CliError::from(orderlab_core::Error::EmptyWindow).exit_code(), 2);
        assert_eq!(
            CliError::from(orderlab_core::Error::Inconsistent("broken")).exit_code(),
            3
        );
    }
}

use std::fmt;

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A check ran and failed (oracle disagreement, failed probe). Exit 1.
    Check(String),
    /// Bad flags or input data. Exit 2.
    Usage(String),
    /// Malformed or invalid configuration. Exit 2.
    Config(String),
    /// Reading or writing a file failed. Exit 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or incomplete configuration; the message names the offending field path.
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Numerical(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io(_) => exit::IO,
        }
    }

    pub fn field(path: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("invalid `{path}`: {reason}"))
    }
}

impl From<thzlink::Error> for CliError {
    fn from(e: thzlink::Error) -> Self {
        use thzlink::Error as E;
        match e {
            E::InvalidParameter { .. } | E::TableFormat { .. } | E::Range(_) => {
                CliError::Config(e.to_string())
            }
            E::Io(_) => CliError::Io(e.to_string()),
            E::Domain(_) | E::Unsupported(_) | E::Accuracy { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

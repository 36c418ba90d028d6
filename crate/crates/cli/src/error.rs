use thiserror::Error;

/// Failures surfaced by the CLI, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or out-of-range parameters (exit 2).
    #[error("{0}")]
    Usage(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column} (`{label}`): missing value; pass --drop-incomplete to skip such rows")]
    MissingValue {
        line: u64,
        column: usize,
        label: String,
    },

    #[error("unknown location `{0}`")]
    UnknownLocation(String),

    #[error(transparent)]
    Model(#[from] maxdep::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Short tag used as `error[<kind>]` on stderr.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::MissingValue { .. } => "missing-value",
            CliError::UnknownLocation(_) => "validation",
            CliError::Model(_) => "validation",
            CliError::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNBOUND: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] manning_rosen::Error),

    #[error("cannot read config {path}: {source}")]
    Config { path: PathBuf, source: io::Error },

    #[error("config {path}, line {line}: {reason}")]
    ConfigSyntax { path: PathBuf, line: usize, reason: String },

    #[error("output error: {0}")]
    Io(#[from] io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use manning_rosen::Error as E;
        match self {
            CliError::Core(E::Unbound { .. }) => EXIT_UNBOUND,
            CliError::Core(E::Solver(_) | E::Quadrature { .. } | E::Normalization(_)) => EXIT_SOLVER,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
            _ => EXIT_USAGE,
        }
    }

    /// Downstream closed the pipe (e.g. `| head`); not worth reporting.
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Json(e) => e.io_error_kind(),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e.kind()),
                _ => None,
            },
            _ => None,
        };
        kind == Some(io::ErrorKind::BrokenPipe)
    }
}

pub type CliResult<T> = Result<T, CliError>;

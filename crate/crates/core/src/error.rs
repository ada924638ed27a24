use thiserror::Error;

/// Errors raised by game construction, solving, kinematics and configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Dimensions of a strategy, profile or matrix do not fit the game.
    #[error("shape error: {0}")]
    Shape(String),
    /// A game or strategy violates one of its structural invariants.
    #[error("invalid game: {0}")]
    InvalidGame(String),
    /// Support enumeration refused a game larger than its cap.
    #[error("capacity exceeded: {rows}x{cols} game, support enumeration is limited to {cap}x{cap}")]
    Capacity { rows: usize, cols: usize, cap: usize },
    /// Physical parameter outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested solving mode is not implemented for this configuration.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// Malformed game description text.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// Malformed extensive-form tree or strategy.
    #[error("structural error: {0}")]
    Structure(String),
    /// Invalid experiment or scenario configuration; names the offending field.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared across the crate.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    Domain(String),
    /// A poset expansion produced a word whose series diverges.
    Divergence { word: String },
    /// A poset is malformed (cyclic covers, unexpanded kernel vertices, ...).
    Structural(String),
    /// Malformed user input (index strings, flags).
    Usage(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Divergence { word } => {
                write!(f, "divergent extension word {word} (must start Y and end X)")
            }
            Error::Structural(msg) => write!(f, "structural error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

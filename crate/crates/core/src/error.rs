use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Guard` is kept apart from the rest because callers (the CLI in particular)
/// treat a refused enumeration differently from malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {requested} exceeds the enumeration guard {limit}")]
    Guard {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("decode error: {0}")]
    Decode(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(what: &'static str, requested: u64, limit: u64) -> Result<()> {
    if requested > limit {
        Err(Error::Guard {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}

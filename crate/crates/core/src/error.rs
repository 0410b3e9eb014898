use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("weight vector has length {got}, ground set has {expected} elements")]
    IndexMismatch { expected: usize, got: usize },

    #[error("element index {index} is outside the ground set of size {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("operation `{op}` is not supported for the {family} family")]
    Unsupported { op: &'static str, family: &'static str },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

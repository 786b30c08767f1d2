use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    ResourceLimit {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    /// The requested input lies outside every branch of a closed form.
    #[error("outside the closed-form domain: {0}")]
    Domain(String),

    #[error("invalid grid: {}", .0.join("; "))]
    InvalidGrid(Vec<String>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

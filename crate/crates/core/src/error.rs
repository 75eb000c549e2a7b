use thiserror::Error;

/// Errors raised by kernel evaluation and measurement statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    /// The closed forms are not valid in the requested regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// The requested observable has no finite correlator for this bath.
    #[error("unsupported observable: {0}")]
    UnsupportedObservable(String),

    /// A derived quantity violated an invariant that should hold by construction.
    #[error("numerical consistency failure: {0}")]
    Consistency(String),

    /// A limit does not exist for these parameters.
    #[error("divergent limit: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name,
        reason: reason.into(),
    }
}

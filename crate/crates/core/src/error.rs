//! Error types shared by all solver modules.

/// Errors produced by the thermodynamic and solver layers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input lies outside the admissible thermodynamic or parameter domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to converge or to bracket a root.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A requested value lies outside the reachable range of a transform.
    #[error("range error: {0}")]
    Range(String),

    /// The qualitative structure required by the operation is absent
    /// (e.g. no two-saddle configuration above the critical temperature).
    #[error("structure error: {0}")]
    Structure(String),

    /// A simulator state violated positivity or fraction bounds.
    #[error("state error at cell {cell}: {msg}")]
    State { cell: usize, msg: String },

    /// A diagnostic measurement could not be taken.
    #[error("measurement error: {0}")]
    Measure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("edge counter overflow at step {tau}: total endpoints would exceed 2^63-1")]
    EdgeOverflow { tau: u64 },

    /// A run was refused because its expected size exceeds the configured limit.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("state space guard: {paths:.3e} enumeration paths exceed the limit of {limit:.0e}")]
    StateSpace { paths: f64, limit: f64 },

    #[error("ensemble aborted: {} of {} replicas failed (first: replica {}: {})",
        .failed.len(), .total, .failed[0].0, .failed[0].1)]
    Ensemble {
        total: usize,
        completed: Vec<usize>,
        failed: Vec<(usize, String)>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

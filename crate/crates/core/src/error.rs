use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A letter or word falls outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("construction error: {0}")]
    Construction(String),
    /// A stabilization loop hit its cap without settling.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

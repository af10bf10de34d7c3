use thiserror::Error;

/// Failure classes shared across the crate.
///
/// The variants are deliberately coarse: callers (in particular the CLI)
/// dispatch on the class, not on the message. `Input` covers malformed or
/// out-of-domain arguments, `Precondition` covers structural requirements
/// such as primitivity or a contracting length change, `Convergence` and
/// `Limit` cover iteration that ran out of accuracy or budget, and
/// `Internal` flags states that should be unreachable when the library's
/// own invariants hold.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("limit error: {0}")]
    Limit(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

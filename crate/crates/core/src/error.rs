use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the function (poles, negative arguments, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size limit was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Data needed for the computation is missing (eigenvalues, harmonic weights).
    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate spectral parameter {tj} at line {line}")]
    Duplicate { line: usize, tj: f64 },

    /// A numerical procedure did not reach its target accuracy.
    #[error("computation failed: {0}")]
    Computation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by bad input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Parse { .. }
                | Error::Duplicate { .. }
                | Error::IncompleteData(_)
        )
    }
}

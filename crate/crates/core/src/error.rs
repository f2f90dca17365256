use thiserror::Error;

/// Errors produced by the analytic and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integral over an infinite range does not converge for this path-loss model.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// The requested frequency-reuse factor has no built-in lattice coloring.
    #[error("unsupported reuse factor K={0}; expected 1, 3 or 4")]
    UnsupportedReuse(u32),

    #[error("point set is empty")]
    EmptySet,

    /// The analytic request has no solution (for example a hardcore distance
    /// below the critical value).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A numerical routine failed to converge or to bracket a root.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A verification or generation setup is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

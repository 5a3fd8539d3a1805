use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bound parameters: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The quadratic coefficient of the bound vanishes (s0 <= 1), so there is
    /// no vertex to report.
    #[error("bound is linear in e at this point (nu_(s0-1) = 0)")]
    LinearInE,
    #[error("non-finite input: {0}")]
    NonFinite(f64),
    #[error("no closed form available for dimension {0} with explicit characteristic")]
    NoClosedForm(u32),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("polynomial evaluation is missing a value for variable `{0}`")]
    MissingVariable(String),

    #[error("operation requires a {expected} profile, got a {found} profile")]
    WrongFamily {
        expected: &'static str,
        found: &'static str,
    },

    #[error("naive labeled evaluation refused for n = {n}: limit is {limit} marks (cost grows like n^3 * 2^n)")]
    TooLarge { n: usize, limit: usize },

    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

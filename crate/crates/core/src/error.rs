use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("series did not converge after {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no sign change found: {0}")]
    NoSignChange(String),

    #[error("root not unique: {0}")]
    NotUnique(String),

    #[error("bound scheme does not apply: {0}")]
    SchemeDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

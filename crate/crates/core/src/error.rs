use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not positive definite (pivot {pivot} of {size})")]
    NotPositiveDefinite { pivot: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("combiner is rank deficient (smallest/largest singular value ratio {ratio:e})")]
    DegenerateCombiner { ratio: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("design failed after {iterations} iterations: {source}")]
    Design {
        iterations: usize,
        trace: Vec<crate::TraceEntry>,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

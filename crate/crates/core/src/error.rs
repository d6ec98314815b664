use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("optical table energies must be strictly increasing (line {line})")]
    NotMonotonic { line: usize },

    #[error("optical table needs at least 2 rows, got {0}")]
    TooFewRows(usize),

    #[error("Fresnel coefficient has a vanishing denominator")]
    DegenerateInterface,

    #[error("square-root branch selection failed: Im k = {0} < 0")]
    Branch(f64),

    #[error("adaptive quadrature hit {panels} panels: value {value:e} ± {error:e}")]
    MaxSubdivisions {
        value: f64,
        error: f64,
        panels: usize,
    },

    #[error("series terms stopped decaying at index {index}")]
    NonDecay { index: usize },

    #[error("not converged after {terms} terms: tail bound {tail:e} exceeds tolerance")]
    NonConvergence { terms: usize, tail: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

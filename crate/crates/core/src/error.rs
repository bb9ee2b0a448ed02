use serde::Serialize;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in estimation, simulation or data handling.
///
/// Errors are `Clone` so that per-replication and per-window failures can be
/// collected into reports alongside successful results.
#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("{name} = {value} is out of range [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("threshold order statistic {value} is not positive; log-excesses are undefined")]
    NonPositiveThreshold { value: f64 },

    #[error("degenerate adjustment factor: {0}; increase k (k should grow faster than n^(2/3))")]
    DegenerateXi(String),

    #[error("joint tail has {available} points but at least {required} are needed")]
    InsufficientJointTail { available: usize, required: usize },

    #[error("gamma1 estimate {0} is not below 1; CoES extrapolation needs a finite mean")]
    Gamma1OutOfRange(f64),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("numerical integration did not converge: {0}")]
    Integration(String),

    #[error("{path}: line {line}: {message}")]
    Data {
        path: String,
        line: u64,
        message: String,
    },

    #[error("misaligned inputs: {0}")]
    Misaligned(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable category, used by the CLI for exit reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidSample(_)
            | Error::OutOfRange { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidModel(_) => "invalid_input",
            Error::NonPositiveThreshold { .. }
            | Error::DegenerateXi(_)
            | Error::InsufficientJointTail { .. }
            | Error::Gamma1OutOfRange(_)
            | Error::MissingInput(_) => "estimation",
            Error::NoRoot(_) | Error::Integration(_) => "numerical",
            Error::Data { .. } | Error::Misaligned(_) => "data",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_range(name: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    } else {
        Ok(())
    }
}

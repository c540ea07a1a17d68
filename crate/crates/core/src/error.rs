use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message} (expected one of: {})", expected.join(", "))]
    Parse {
        position: usize,
        message: String,
        expected: Vec<String>,
    },

    #[error("deformation {spec} is not positive at n = {n}: f(n) = {value}")]
    NonPositiveValue { spec: String, n: f64, value: f64 },

    #[error("index {n} is outside the table range 0..={n_max}")]
    OutOfRange { n: usize, n_max: usize },

    #[error("amplitude F(n) is singular for {spec} at n = {n}")]
    SingularAmplitude { spec: String, n: f64 },

    #[error("series did not reach tolerance {tol:e} within {n_max} terms")]
    SeriesDivergence { n_max: usize, tol: f64 },

    #[error("field `{label}` carries no analytic profile for derivative order ({dq}, {dp})")]
    ProfileUnavailable { label: String, dq: usize, dp: usize },

    #[error("grid axis has {len} samples, fourth-order stencils need at least 5")]
    StencilTooSmall { len: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every defect sample fell below the fit floor, so no slope exists.
    #[error("all associativity defects are below {floor:e}; exact-zero case")]
    DegenerateFit { floor: f64, samples: Vec<(f64, f64)> },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>, expected: &[&str]) -> Self {
        Error::Parse {
            position,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
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

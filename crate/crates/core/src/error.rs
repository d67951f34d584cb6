use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse failure category, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("index gap: period {missing} is missing")]
    Gap { missing: String },
    #[error("no data rows")]
    Empty,
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("duplicate series name `{0}`")]
    DuplicateSeries(String),
    #[error("series `{0}` is not aligned with the dataset index")]
    Misaligned(String),
    #[error("residual series has no value for period {0}")]
    MisalignedResiduals(String),
    #[error("series too short: need at least {needed} observations, have {got}")]
    TooShort { needed: usize, got: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("no bounds table for case {case} with k={k}")]
    MissingBoundsTable { case: String, k: usize },

    #[error("rank deficient design: column `{column}` is collinear with earlier columns{}",
        step.map(|s| format!(" (recursive step {s})")).unwrap_or_default())]
    RankDeficient { column: String, step: Option<usize> },
    #[error("too few observations: {n} rows for {k} regressors")]
    TooFewObservations { n: usize, k: usize },
    #[error("restriction covariance is singular")]
    SingularRestriction,
    #[error("residual covariance is singular")]
    SingularCovariance,
    #[error("series `{0}` has zero variance")]
    DegenerateSeries(String),
    #[error("dependent level coefficient is numerically zero")]
    DegenerateDenominator,
    #[error("residuals are identically zero")]
    ZeroResiduals,
    #[error("no unit-root rejection up to difference order {max_d}")]
    Inconclusive { max_d: usize },
    #[error("lag grid is empty")]
    EmptyGrid,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidSpec(_) | Error::MissingBoundsTable { .. } => ErrorKind::Usage,
            Error::Parse { .. }
            | Error::Gap { .. }
            | Error::Empty
            | Error::UnknownSeries(_)
            | Error::DuplicateSeries(_)
            | Error::Misaligned(_)
            | Error::MisalignedResiduals(_)
            | Error::TooShort { .. }
            | Error::Io(_) => ErrorKind::Data,
            _ => ErrorKind::Numerical,
        }
    }

    pub(crate) fn rank(column: impl Into<String>) -> Self {
        Error::RankDeficient { column: column.into(), step: None }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let row = e.position().map(|p| p.line() as usize).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse { row, col: 0, msg: format!("{other:?}") },
        }
    }
}

use std::path::PathBuf;

/// Errors returned by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A CSV cell or record could not be interpreted. `row` is 1-based and
    /// counts the header as row 1.
    #[error("row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("month gap: {year}-{month:02} is missing")]
    MonthGap { year: i32, month: u32 },
    #[error("row {row}, column {column}: negative rainfall value {value}")]
    NegativeValue {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("split ratio {0} must lie strictly between 0 and 1")]
    InvalidRatio(f64),
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("unsupported wavelet family '{0}' (expected haar, db4, sym4 or coif3)")]
    UnsupportedFamily(String),
    #[error("decomposition level {requested} exceeds the maximum {max} for this series")]
    LevelTooHigh { requested: usize, max: usize },
    #[error("zero standard deviation: cannot standardize a constant series")]
    ZeroVariance,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("optimizer did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("fitted {0} polynomial is not admissible (root on or inside the unit circle)")]
    Inadmissible(&'static str),
    #[error("no candidate model could be fitted: {0}")]
    AllCandidatesFailed(String),
    #[error("training diverged at epoch {epoch}, batch {batch}: non-finite loss")]
    Divergence { epoch: usize, batch: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("component {component}: {source}")]
    Component {
        component: String,
        #[source]
        source: Box<Error>,
    },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used by the command-line driver to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inadmissible input data or arguments.
    Data,
    /// A model failed to fit, train or forecast.
    Model,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NoConvergence { .. }
            | Error::Inadmissible(_)
            | Error::AllCandidatesFailed(_)
            | Error::Divergence { .. }
            | Error::NonFinite(_) => ErrorKind::Model,
            Error::Component { source, .. } => source.kind(),
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn in_component(self, component: impl Into<String>) -> Self {
        Error::Component {
            component: component.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

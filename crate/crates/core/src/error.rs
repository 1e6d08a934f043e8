use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid letter: {0}")]
    InvalidLetter(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("relator count {requested} exceeds the budget of {budget}")]
    RelatorBudget { requested: u128, budget: usize },
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("ball budget of {budget} elements exceeded; radius {completed_radius} was complete")]
    BallBudget { budget: usize, completed_radius: usize },
    #[error("ball radius {radius} is too small for length {length} (needs {needed})")]
    InsufficientRadius { radius: usize, length: usize, needed: usize },
    #[error("all counts vanish; the exponent estimate is undefined")]
    UndefinedEstimate,
    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: String },
    #[error("no exponent solves the Grigorchuk relation for theta = {theta}")]
    NoSolution { theta: f64 },
    #[error("locality hypothesis not met: A = {a} < B = {b}")]
    HypothesisNotMet { a: f64, b: f64 },
    #[error("counts do not cover the window [{lo}, {hi}] (exact up to {exact_up_to})")]
    IncompleteWindow { lo: usize, hi: usize, exact_up_to: usize },
    #[error("count table needs length {needed} but is exact only up to {exact_up_to}")]
    Coverage { needed: usize, exact_up_to: usize },
    #[error("count table violates superadditivity at {a} + {b}")]
    NotSuperadditive { a: usize, b: usize },
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("{context}: {source}")]
    Io {
        context: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { context: path.into(), source }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

use crate::model::io::ParseError;
use crate::model::ValidationReport;
use crate::separation::FlowError;
use crate::solver::LpStatus;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),
    #[error("row {row} is not in <= form; canonicalize the instance first")]
    NotCanonical { row: usize },
    #[error("equality row {row} rejected in strict mode")]
    EqualityRow { row: usize },
    #[error("x[{col}] = {value} is negative")]
    NegativeValue { col: usize, value: f64 },
    #[error("vector has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("enumeration too large: {uncertain} uncertain coefficients over {bands} bands")]
    TooLarge { uncertain: usize, bands: usize },
    #[error("certificate for row {row} is not violated; no cut to emit")]
    NotViolated { row: usize },
    #[error("budget {gamma} outside [0, {n}]")]
    Budget { gamma: usize, n: usize },
    #[error("{context}: LP status {status}")]
    Solver { context: String, status: LpStatus },
    #[error("LP solver failure: {0}")]
    SolverFailure(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("calibration: {0}")]
    Calibration(String),
    #[error("instance generation: {0}")]
    Generation(String),
}

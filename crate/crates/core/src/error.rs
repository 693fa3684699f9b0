use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("the zero function has no lowest degree")]
    ZeroFunction,
    #[error("matrix is not in the big cell (a leading principal minor vanishes identically)")]
    NotInBigCell,
    #[error("matrix is not in the required cell")]
    NotInCell,
    #[error("matrix is not symbolically invertible")]
    NonInvertible,
    #[error("sequence is not reduced")]
    NotReduced,
    #[error("index {0} is not in the crystal support")]
    UnsupportedIndex(usize),
    #[error("element is not supported by the crystal")]
    NotSupported,
    #[error("Cartan pairing of the index pair does not match the requested pattern")]
    PatternMismatch,
    #[error("gamma is degenerate: a fundamental-weight coordinate vanishes identically")]
    DegenerateGamma,
    #[error("expression is not certified positive")]
    NotCertifiedPositive,
    #[error("crystal is degenerate: v-map fails identically on the chart")]
    Degenerate,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

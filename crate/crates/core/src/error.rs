use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid axis {axis} for a joint with {arity} axes")]
    BadAxis { axis: usize, arity: usize },

    #[error("wrong arity: expected {expected} axes, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("enumeration limit exceeded: {required} outcomes requested, limit {limit}")]
    EnumerationLimit { required: u128, limit: u128 },

    #[error("codebook budget exceeded: {required} symbols required, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("message ({m}, {mprime}) outside codebook of size {num_m} x {num_mprime}")]
    MessageOutOfRange { m: usize, mprime: usize, num_m: usize, num_mprime: usize },

    #[error("every codeword has zero likelihood for the observed sequence")]
    AllZeroLikelihood,

    #[error("infeasible distortion target {target}: {reason}")]
    InfeasibleTarget { target: f64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

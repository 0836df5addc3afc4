use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: supported range is 1..={max}", max = crate::poly::MAX_DIM)]
    InvalidDimension(usize),
    #[error("invalid cap {name} = {value}")]
    InvalidCap { name: &'static str, value: usize },
    #[error("dimension mismatch between operands")]
    DimensionMismatch,
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("jet-order cap {cap} exceeded")]
    JetCapExceeded { cap: usize },
    #[error("vector-field derivative cap {cap} exceeded")]
    VsymCapExceeded { cap: usize },
    #[error("operation not available for the {0} schema")]
    Schema(&'static str),
    #[error("expected bidegree {expected}, found {found}")]
    Bidegree { expected: String, found: String },
    #[error("family is not antisymmetric at entry {0}")]
    NotAntisymmetric(String),
    #[error("unknown vector-field label `{0}`")]
    UnknownLabel(String),
    #[error("Lie bracket of `{0}` and `{1}` leaves the registered label set")]
    BracketClosure(String, String),
    #[error("non-hamiltonian input: {0}")]
    NonHamiltonian(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("oracle sampler exceeded {0} resampling attempts")]
    ResampleLimit(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("identity failed during construction: {0}")]
    SelfCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

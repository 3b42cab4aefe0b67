use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field mismatch: p={expected} vs p={got}")]
    FieldMismatch { expected: u32, got: u32 },
    #[error("monomial is not divisible")]
    NotDivisible,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("reducer matrix is not a full-rank echelon form: {0}")]
    MalformedReducer(String),
    #[error("empty pair set")]
    EmptyPairSet,
    #[error("two basis elements share the leading monomial {0}")]
    DuplicateLeadingMonomial(String),
    #[error("trace header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("degree bound {0} too small for a Groebner basis")]
    DegreeBoundTooSmall(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

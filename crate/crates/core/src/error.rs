use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} must be >= {min}, got {value}")]
    BelowMinimum {
        what: &'static str,
        min: i64,
        value: i64,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: i64, max: usize },

    #[error("target degree {target} is below source degree {source_degree}")]
    DegreeDecrease { source_degree: usize, target: usize },

    #[error("point masses must be nonnegative (M = {left}, N = {right})")]
    NegativeMass { left: String, right: String },

    #[error("pi exponent overflow: pi^({0}/2) is outside the supported range")]
    PiExponent(u32),

    #[error("cannot add values with different powers of pi ({0}/2 vs {1}/2)")]
    PiMismatch(u8, u8),

    #[error("degree bound unknown; cannot size the quadrature rule")]
    UnknownDegreeBound,

    #[error("degenerate norm for basis element {k}: {norm:e}")]
    DegenerateNorm { k: usize, norm: f64 },

    #[error("normal equations could not be solved (condition estimate {condition:e})")]
    Solver { condition: f64 },

    #[error("coefficient list is empty")]
    EmptyCoefficients,

    #[error("flavor mismatch: expected {expected}, found {found}")]
    FlavorMismatch {
        expected: &'static str,
        found: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

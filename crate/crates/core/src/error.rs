use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("operands live in different fields: GF({0}) and GF({1})")]
    MixedFields(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("construction needs a field with more than two elements, got GF({0})")]
    FieldTooSmall(u32),
    #[error("lambda must avoid 0 and 1, got {0}")]
    BadLambda(u32),
    #[error("family does not pass verification")]
    VerificationRequired,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("repair scheme invalid: {0}")]
    SchemeInvalid(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("ambient dimension {ell} exceeds ceiling {ceiling}")]
    CeilingExceeded { ell: usize, ceiling: usize },
    #[error("geometric decay violated at step {step}: I_t = {dim}, previous = {prev}")]
    DecayViolated { step: usize, dim: usize, prev: usize },
}

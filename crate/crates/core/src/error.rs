use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("field order {0} exceeds 2^32")]
    FieldTooLarge(u128),
    #[error("element index {index} out of range for field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("F_{base} is not a subfield of F_{order}")]
    BaseNotSubfield { base: u64, order: u64 },
    #[error("descent to the non-prime subfield F_{0} is not supported")]
    NonPrimeBase(u64),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("{0} exceeds the 2^64 factorization bound")]
    FactorizationOverflow(u128),
    #[error("pollard rho failed to split {0}")]
    FactorizationFailed(u64),
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("zero element has no multiplicative order")]
    ZeroElement,
    #[error("conjugate product left a coefficient outside the base field")]
    CoefficientNotDescended,
    #[error("block matrix B is singular")]
    SingularB,
    #[error("expected degree {expected}, found {found}")]
    BadDegree { expected: String, found: String },
    #[error("{what}: {value} exceeds guard {limit}")]
    ScaleExceeded { what: &'static str, value: u128, limit: u128 },
    #[error("fiber size {m} does not divide {count}")]
    FiberSizeViolation { m: u32, count: u64 },
    #[error("q = {q} >= 3 requires odd n (got n = {n})")]
    InvalidParity { q: u64, n: u32 },
    #[error("budget exhausted after {tried} candidates")]
    BudgetExhausted { tried: u64 },
    #[error("existence violation: {0}")]
    ExistenceViolation(String),
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

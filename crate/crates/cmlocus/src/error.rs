use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("precision {prec} is out of range for p = {p} (max {max})")]
    BadPrecision { p: u64, prec: u32, max: u32 },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("division by p^{0} is not exact")]
    InexactDivision(u32),
    #[error("truncation too small: {0}")]
    PrecisionExhausted(String),
    #[error("x1-window exhausted at width {0}")]
    WindowExhausted(i64),
    #[error("structure clause failed: {0}")]
    StructureViolation(String),
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("lattice outside the expected family: {0}")]
    ShapeViolation(String),
    #[error("descended lattice is not stable: {0}")]
    StabilityFailure(String),
    #[error("lattice precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

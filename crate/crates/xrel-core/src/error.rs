//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible field discriminants {0} and {1}")]
    IncompatibleFields(i64, i64),
    #[error("invalid number literal `{0}`")]
    Parse(String),
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),
    #[error("singular curve: the cubic discriminant vanishes")]
    SingularCurve,
    #[error("point ({0}, {1}) is not on the curve")]
    PointNotOnCurve(String, String),
    #[error("unsupported endomorphism for this curve: {0}")]
    UnsupportedEndo(String),
    #[error("unsupported coordinate transform: {0}")]
    UnsupportedTransform(String),
    #[error("relation coefficients must all be nonzero")]
    ZeroCoefficient,
    #[error("no constant solution: the coefficient condition fails")]
    NoConstantSolution,
    #[error("enumeration box {0} exceeds the configured cap {1}")]
    BoxTooLarge(u32, u32),
    #[error("torsion list must contain the point at infinity")]
    TorsionMissingIdentity,
    #[error("argument lies on the period lattice (pole)")]
    Pole,
    #[error("period computation failed to validate the lattice invariants")]
    Periods,
    #[error("scan order {0} exceeds the supported bound {1}")]
    ScanTooLarge(u64, u64),
}

pub type Result<T> = std::result::Result<T, Error>;

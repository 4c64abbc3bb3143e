use num::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not in B_A: no A^k b is integral for k <= {cap} (depth cap)")]
    NotInGroup { cap: usize },

    #[error("denominator {q} shares a factor with det A = {det}")]
    NotCoprime { q: BigInt, det: BigInt },

    #[error("period mismatch: orbit has period {actual}, requested {requested}")]
    PeriodMismatch { requested: usize, actual: usize },

    #[error("orbit exceeded bound {bound}; use the windowed realization instead")]
    InfiniteOrbit { bound: usize },

    #[error("orbit is finite with period {period}; use the commutant of U_p instead")]
    FiniteOrbit { period: usize },

    #[error("character kinds differ ({0} vs {1})")]
    KindMismatch(&'static str, &'static str),

    #[error("window half-width {half_width} too small: need at least {needed}")]
    WindowTooSmall { half_width: usize, needed: usize },

    #[error("multiplier support touches the window boundary at index {index}")]
    BoundaryTouched { index: i64 },

    #[error("tower is constant (|det A| = 1)")]
    ConstantTower,

    #[error("size cap exceeded: {size} > {cap}")]
    CapExceeded { size: BigInt, cap: u64 },

    #[error("interval [{0}, {1}) contains 0 in its interior")]
    ZeroInInterior(String, String),

    #[error("generator lists differ in length ({0} vs {1})")]
    GeneratorMismatch(usize, usize),

    #[error("{0}")]
    Invalid(String),
}

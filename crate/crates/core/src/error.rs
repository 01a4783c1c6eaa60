use thiserror::Error;

/// Errors raised by the library. Variants are shared across modules so that
/// callers (the CLI in particular) can map them to exit codes in one place.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("empty matrix")]
    Empty,
    #[error("diagonal entry a[{i}][{i}] = {value}, expected 2")]
    DiagonalNotTwo { i: usize, value: i64 },
    #[error("off-diagonal entry a[{i}][{j}] = {value} is positive")]
    PositiveOffDiagonal { i: usize, j: usize, value: i64 },
    #[error("a[{i}][{j}] = 0 but a[{j}][{i}] = {value}")]
    ZeroAsymmetry { i: usize, j: usize, value: i64 },
    #[error("pairing mismatch: <h[{i}], c[{j}]> = {got}, expected {expected}")]
    PairingMismatch { i: usize, j: usize, got: i64, expected: i64 },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("enumeration exceeded the cap of {cap} elements")]
    ExplosionGuard { cap: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("vector {0:?} has mixed signs")]
    MixedSign(Vec<i64>),
    #[error("vector {0:?} is not a real root")]
    NotARealRoot(Vec<i64>),
    #[error("roots are not a prenilpotent pair")]
    NotPrenilpotent,
    #[error("undecided within search radius {radius}")]
    Undecided { radius: usize },
    #[error("generator subset {0:?} does not generate a finite group")]
    NotSpherical(Vec<usize>),
    #[error("root set is not nilpotent: {0}")]
    NotNilpotentSet(String),
    #[error("constructed ordering is not a nibbling sequence: {0}")]
    OrderingFailed(String),
    #[error("functional has negative value {value} at e_{index}")]
    NotInFundamentalChamber { index: usize, value: String },
    #[error("not a diagram automorphism: {0:?}")]
    NotAnAutomorphism(Vec<usize>),
    #[error("automorphism list is not closed under composition")]
    NotClosedUnderComposition,
    #[error("generator subset is not stable under the automorphism group")]
    NotStable,
    #[error("orbit {0:?} does not span a spherical subdiagram")]
    OrbitNotSpherical(Vec<usize>),
    #[error("unsupported field F_{p}^{e}")]
    UnsupportedField { p: u8, e: u8 },
    #[error("field mismatch")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad affine root: {0}")]
    BadRoot(String),
    #[error("root group element is trivial")]
    TrivialElement,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("degree window |k| <= {window} exceeded")]
    DegreeWindowExceeded { window: i32 },
    #[error("unsupported level {0}")]
    UnsupportedLevel(i32),
    #[error("oracle inconsistent: {0}")]
    OracleInconsistent(String),
    #[error("root subdatum axiom violated: {0}")]
    RsdViolation(String),
    #[error("element is not in the generated group")]
    NotInGeneratedGroup,
    #[error("chambers have the same sign")]
    SameSign,
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u64>),
    #[error("modulus {0:?} is not monic")]
    NotMonic(Vec<u64>),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("coefficient {value} is not a residue mod {p}")]
    CoefficientRange { value: u64, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("unsupported field: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("order exceeds cap {0}")]
    OrderExceedsCap(u64),
    #[error("row {0} does not have exactly one nonzero entry")]
    NotMonomial(usize),
    #[error("subspace spanned by {0:?} is not invariant")]
    NotInvariant(Vec<usize>),
    #[error("index partition is not a disjoint cover of 1..={0}")]
    BadPartition(usize),
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GensError {
    #[error("construction requires characteristic 5, got {0}")]
    WrongCharacteristic(u64),
    #[error("unsupported prime {0}")]
    Unsupported(u64),
    #[error("invalid parameter t = {t}: {reason}")]
    InvalidParameter { t: String, reason: String },
    #[error("constructed element fails a defining property: {0}")]
    Construction(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action space has {points} points, above the guard of {guard}")]
    SpaceTooLarge { points: u128, guard: u64 },
    #[error("base length exceeded {0}; the action is probably inconsistent")]
    DepthExceeded(usize),
    #[error("element does not act on this space")]
    Incompatible,
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Gens(#[from] GensError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

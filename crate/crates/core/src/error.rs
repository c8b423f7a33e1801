use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry ({row},{col}) is zero; matrix is not Schur invertible")]
    SchurSingular { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("mixed exact/approx inputs where exact mode was required")]
    ModeMismatch,
    #[error("cyclotomic field of order {order} exceeds the supported degree")]
    FieldTooLarge { order: u32 },
    #[error("inputs do not commute: matrices {0} and {1}")]
    NonCommuting(usize, usize),
    #[error("input {0} is not normal")]
    NotNormal(usize),
    #[error("could not recognise eigenvalue {value} as a cyclotomic integer")]
    Recognition { value: String },
    #[error("eigenspace splitting failed: {0}")]
    Splitting(String),
    #[error("axiom ({axiom}) fails: {witness}")]
    Axiom { axiom: u8, witness: String },
    #[error("not an association scheme: {0}")]
    NotAScheme(String),
    #[error("scheme is not commutative")]
    NonCommutative,
    #[error("size cap exceeded: {what} = {size} > {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },
    #[error("invalid group table: {0}")]
    NotAGroup(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("diagonal of W- is not constant")]
    NoParameterA,
    #[error("J W+ is not proportional to J")]
    NoLoopScalar,
    #[error("graph is not distance-regular: {0}")]
    NotDistanceRegular(String),
    #[error("theta values collide at indices ({0},{1})")]
    Admissibility(usize, usize),
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("{e} (line {}, column {})", e.line(), e.column()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

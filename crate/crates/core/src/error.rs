use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands have {left} and {right} variables")]
    NvarsMismatch { left: usize, right: usize },

    #[error("orders {left} and {right} lie in different sectors of Q/Z")]
    SectorMismatch { left: String, right: String },

    #[error("degree windows do not overlap")]
    DisjointWindows,

    #[error("degree {degree} is outside the stored window")]
    DegreeOutsideWindow { degree: String },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("window must be positive")]
    EmptyWindow,

    #[error("operator is zero on its stored window")]
    ZeroOperator,

    #[error("operator is not invertible: {0}")]
    NotInvertible(String),

    #[error("operation requires integer order, got sector {0}")]
    FractionalSector(String),

    #[error("invalid nerve: {0}")]
    InvalidNerve(String),

    #[error("coefficient groups {left} and {right} do not match")]
    CoefficientMismatch { left: String, right: String },

    #[error("no cup pairing between {left} and {right}")]
    PairingUndefined { left: String, right: String },

    #[error("invalid coefficient value: {0}")]
    InvalidValue(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),

    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),

    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("operation requires an abelian group")]
    NonAbelian,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("descent data not in normal form: {0}")]
    NotNormalForm(String),

    #[error("fiber monodromy {monodromy} does not match shift {shift}")]
    MonodromyMismatch { monodromy: String, shift: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

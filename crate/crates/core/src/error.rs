use thiserror::Error;

/// Errors raised while building or validating a group table.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid parameter for {construction}: {reason}")]
    InvalidParameter { construction: &'static str, reason: String },
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("action is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("order of the action does not divide {m}")]
    ActionOrder { m: usize },
    #[error("element index {index} out of range for order {order}")]
    ElementOutOfRange { index: usize, order: usize },
}

/// Failures of the numerical representation-theory routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("eigenvalue cluster ambiguity after {attempts} attempts (smallest gap {gap:.3e})")]
    EigenCluster { attempts: usize, gap: f64 },
    #[error("degree {value} is not within {tol:e} of an integer")]
    DegreeRounding { value: f64, tol: f64 },
    #[error("character table failed validation: {0}")]
    Validation(String),
    #[error("invariant subspace check failed for irrep {irrep}: deviation {deviation:.3e}")]
    Invariance { irrep: usize, deviation: f64 },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("stale cache entry: {0}")]
    Stale(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Errors from the group-expression language.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown atom `{atom}` at byte {offset}")]
    UnknownAtom { offset: usize, atom: String },
    #[error("malformed action `{action}` at byte {offset}")]
    MalformedAction { offset: usize, action: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Errors from building a parametrised family.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

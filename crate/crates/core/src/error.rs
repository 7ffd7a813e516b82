use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by constructions, verifiers and file readers.
///
/// Variants that stand for a violated code invariant carry enough context to
/// locate the offending row, column or cycle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inverse of zero requested")]
    ZeroInverse,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("walk is not a cycle of the graph: {0}")]
    NotACycle(String),
    #[error("precondition violated at {node}: {reason}")]
    Precondition { node: String, reason: String },
    #[error("column-weight-2 violated: column {col} of {matrix} has weight {weight}")]
    ColumnWeight { matrix: &'static str, col: usize, weight: usize },
    #[error("orthogonality violated: row {row_x} of H_X and row {row_z} of H_Z have nonzero product")]
    Orthogonality { row_x: usize, row_z: usize },
    #[error("support condition violated at {matrix}({row}, {col})")]
    Support { matrix: &'static str, row: usize, col: usize },
    #[error("cycle product {product} != 1 on {context}")]
    CycleProduct { context: String, product: u16 },
    #[error("inconsistent closure solving row {row}, cycle {cycle}")]
    ClosureInconsistent { row: usize, cycle: usize },
    #[error("rank check failed: {0}")]
    Rank(String),
    #[error("logical operator check failed: {0}")]
    Logical(String),
    #[error("enumeration budget exceeded: {needed} codewords > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("residual has nonzero syndrome")]
    NonzeroSyndrome,
    #[error("parse error: {0}")]
    Parse(String),
}

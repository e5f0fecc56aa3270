use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("non-generic input: {0}")]
    NonGeneric(String),
    #[error("irregular singular point at {0}")]
    IrregularSingularPoint(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate flag: {0}")]
    DegenerateFlag(String),
    #[error("not in the Schubert cell: {0}")]
    NotInCell(String),
    #[error("subspace is not invariant (leakage {0:e})")]
    NotInvariant(f64),
    #[error("degeneration mismatch: {0}")]
    DegenerationMismatch(String),
    #[error("Puiseux limit not resolved; refine schedule/precision ({0})")]
    PuiseuxNotResolved(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("operator is not in the class Delta: {0}")]
    NotInDelta(String),
    #[error("epimorphism annihilates the limit vector after {0} attempts")]
    DegenerateEpimorphism(usize),
    #[error("configuration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

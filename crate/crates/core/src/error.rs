use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),

    #[error("near-orthogonal pair: |<u,v>| = {dot:e} is below the cost threshold")]
    NearOrthogonal { dot: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible marginals: supply sums to {supply}, demand sums to {demand}")]
    InfeasibleMarginals { supply: f64, demand: f64 },

    #[error("instance too large for brute force: {size} > {max}")]
    TooLarge { size: usize, max: usize },

    #[error("pairing is not c-cyclically monotone: cycle {cycle:?} has weight {weight:e}")]
    NotMonotone { cycle: Vec<usize>, weight: f64 },

    #[error("certificate failure: {0}")]
    CertificateFailure(String),

    #[error("section plane does not meet the interior of the pseudo-cone")]
    EmptySection,

    #[error("transportation simplex exceeded {0} pivots")]
    IterationLimit(usize),

    #[error("schema error: {0}")]
    Schema(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Self::Schema(e.to_string())
    }
}

use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identified node set is not a clique in {0}")]
    NotAClique(&'static str),
    #[error("matrix is not in the elliptope: {0}")]
    NotInElliptope(String),
    #[error("graph has a K4 minor; the metric test is only necessary there")]
    NotK4MinorFree,
    #[error("result within tolerance of a boundary: {0}")]
    ToleranceAmbiguous(String),
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: u64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("shared clique Gram values disagree: {0}")]
    SharedMismatch(String),
    #[error("edge weights must lie in {{1,2}}; edge {edge} has {weight}")]
    BadWeights { edge: usize, weight: String },
    #[error("witness fails verification: {0}")]
    WitnessFailed(String),
    #[error("hat block for edge {edge} is not an extreme point of E3")]
    BlockNotExtreme { edge: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

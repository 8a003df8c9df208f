use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("malformed sphere file: {0}")]
    Parse(String),

    #[error("invalid sphere: {0}")]
    Validation(String),

    #[error("no facet flag: greedy search with backtracking exhausted all orderings")]
    NoFlag,

    #[error("no facet basis for facet {facet}: cannot complete a {needed}-chain inside it")]
    NoBasis { facet: usize, needed: usize },

    #[error("orientation inference stalled; unsigned columns: {0:?}")]
    OrientationStalled(Vec<usize>),

    #[error("invalid dehomogenization: {0}")]
    Dehomogenize(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no constraints: pool is empty after filtering")]
    EmptyPool,

    #[error("certificate invalid: residual is nonzero: {0}")]
    CertificateInvalid(String),

    #[error("final-polynomial translation unavailable: {0}")]
    TranslationUnavailable(String),

    #[error("missing variable {0} in evaluation assignment")]
    MissingVariable(String),

    #[error("time limit exceeded")]
    TimeLimit,

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

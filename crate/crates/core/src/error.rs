use thiserror::Error;

/// Errors raised across the exact layer, the engine, the constructors and the lab.
///
/// Every variant maps to a short machine-readable reason via [`Error::code`],
/// which the CLI prints and tests match on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("functional vanishes identically on the subspace (index {0})")]
    Unavoidable(usize),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid infinitude relation: {0}")]
    BadRelation(String),
    #[error("step sequence values are not pairwise distinct")]
    NotCanonical,
    #[error("matrix columns are not pairwise distinct (merge them first)")]
    DuplicateColumns,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("{what} = {got} exceeds the cap {cap}; use sampling mode")]
    TooLarge {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("point configuration is collinear")]
    Collinear,
    #[error("value out of range: {0}")]
    Range(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Unavoidable(_) => "unavoidable",
            Error::Empty(_) => "empty",
            Error::BadRelation(_) => "bad-relation",
            Error::NotCanonical => "not-canonical",
            Error::DuplicateColumns => "duplicate-columns",
            Error::ZeroDirection => "zero-direction",
            Error::TooLarge { .. } => "too-large",
            Error::TooFewRows { .. } => "too-few-rows",
            Error::Collinear => "collinear",
            Error::Range(_) => "range",
            Error::Degenerate(_) => "degenerate",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity k={k} exceeds variable count n={n}")]
    ArityExceedsVariables { k: u32, n: usize },
    #[error("arity k={k} is below 2")]
    ArityTooSmall { k: u32 },
    #[error("domain size d={d} is below 2")]
    DegenerateDomain { d: u32 },
    #[error("instance needs at least one variable")]
    NoVariables,
    #[error("q={q} incompatible tuples exceeds the {tuples} tuples available")]
    EmptyRelation { q: u64, tuples: u64 },
    #[error("q must be at least 1")]
    ZeroTightness,
    #[error("tuple space d^k = {d}^{k} does not fit in 64 bits")]
    TupleSpaceOverflow { d: u32, k: u32 },
    #[error("invalid constraint #{index}: {reason}")]
    InvalidConstraint { index: usize, reason: String },
    #[error("instance is not strict (q={q} >= d={d}); the formulas need q < d")]
    NonStrict { q: u64, d: u32 },
    #[error("level {i} outside 0..={max}")]
    LevelOutOfRange { i: usize, max: usize },
    #[error("no interior maximum: r={r} does not exceed r0={r0}")]
    RegimeMismatch { r: f64, r0: f64 },
    #[error("constraint density must be positive (t = 0)")]
    DegenerateDensity,
    #[error("invalid analytic parameters: {0}")]
    InvalidAnalytic(String),
    #[error("search-tree node counter overflowed 64 bits")]
    NodeOverflow,
    #[error("brute force over d^n = {d}^{n} assignments exceeds the {limit} guard")]
    SizeGuard { d: u32, n: usize, limit: u64 },
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

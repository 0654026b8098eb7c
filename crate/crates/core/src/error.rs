use thiserror::Error;

/// Errors for contract violations and I/O failures.
///
/// Statistical rejections are not errors; they travel through
/// [`TesterVerdict`](crate::TesterVerdict) and carry a diagnostic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("direction vector has near-zero norm ({norm:e})")]
    ZeroDirection { norm: f64 },

    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("label must be +1 or -1, got {0}")]
    BadLabel(i64),

    #[error("power iteration did not converge within {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("moment test would enumerate {count} monomials (limit {limit})")]
    MonomialExplosion { count: usize, limit: usize },

    #[error("split fractions must sum to 1 (got {sum}) and be nonnegative")]
    BadSplitFractions { sum: f64 },

    #[error("cannot split {points} points into {parts} nonempty parts")]
    SplitTooFine { points: usize, parts: usize },

    #[error("noise budget {0} is out of range [0, 0.5)")]
    BadNoiseBudget(f64),

    #[error("sample source exhausted: requested {requested} points, {available} available")]
    SourceExhausted { requested: usize, available: usize },

    #[error("malformed dataset file, line {line}: {reason}")]
    MalformedDataset { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

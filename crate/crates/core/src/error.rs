use thiserror::Error;

use crate::instance::Violation;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance:\n{}", format_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("objective index {index} out of range (k = {k})")]
    ObjectiveIndex { index: usize, k: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("polyhedron is unbounded along coordinate {0}")]
    Unbounded(usize),

    #[error("too large for exact vertex enumeration: {rows} rows in dimension {n} (limits: {max_rows} rows, n <= {max_n})")]
    TooLarge {
        rows: usize,
        n: usize,
        max_rows: usize,
        max_n: usize,
    },

    #[error("feasible region is empty")]
    Infeasible,

    #[error("membership level {0} outside (0, 1]")]
    LevelOutOfRange(f64),

    #[error("membership function parameters invalid: {0}")]
    BadMembership(String),

    #[error("sampling domain is empty or count < 2")]
    EmptyDomain,

    #[error("max-min decision is zero everywhere (no point has positive membership in every goal)")]
    NoPositiveLevel,

    #[error("level set at lambda = {0} is empty")]
    EmptyLevelSet(f64),

    #[error("linear subproblem failed: {0}")]
    Lp(String),

    #[error("{step}: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Tags the error with the pipeline step that raised it.
    pub fn at(self, step: &'static str) -> Self {
        Error::Step { step, source: Box::new(self) }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;

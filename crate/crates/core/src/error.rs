use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Labels are 0-based positions in a point set.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point set is degenerate: labels {0:?} are collinear")]
    Degenerate([usize; 3]),

    #[error("labels {0} and {1} hold the same point")]
    DuplicatePoint(usize, usize),

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("segments overlap along a collinear run")]
    CollinearOverlap,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("n = {n} is too small: {reason}")]
    TooSmall { n: u64, reason: String },

    #[error("configuration is not in general position: labels {0:?} are collinear")]
    DegenerateConfig([usize; 3]),

    #[error("square separation violated: {0}")]
    SeparationViolated(String),

    #[error("coordinates too large for the vertex precision guard: {0}")]
    PrecisionExceeded(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("square {0} is not alive")]
    SquareDead(usize),

    #[error("square {0} has no admissible grid point")]
    Exhausted(usize),

    #[error("script names square {square} at step {step}, which is not alive")]
    ScriptDeadSquare { step: usize, square: usize },

    #[error("requested {requested} steps but only {available} squares remain")]
    TooManySteps { requested: usize, available: usize },

    #[error("search space of {estimate} tuples exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable upper-case name of the variant, printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Degenerate(_) => "DEGENERATE",
            Error::DuplicatePoint(..) => "DUPLICATE_POINT",
            Error::DegenerateSegment => "DEGENERATE_SEGMENT",
            Error::CollinearOverlap => "COLLINEAR_OVERLAP",
            Error::NotPrime(_) => "NOT_PRIME",
            Error::TooSmall { .. } => "TOO_SMALL",
            Error::DegenerateConfig(_) => "DEGENERATE_CONFIG",
            Error::SeparationViolated(_) => "SEPARATION_VIOLATED",
            Error::PrecisionExceeded(_) => "PRECISION_EXCEEDED",
            Error::InvalidPermutation(_) => "INVALID_PERMUTATION",
            Error::SquareDead(_) => "SQUARE_DEAD",
            Error::Exhausted(_) => "EXHAUSTED",
            Error::ScriptDeadSquare { .. } => "SCRIPT_DEAD_SQUARE",
            Error::TooManySteps { .. } => "TOO_MANY_STEPS",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::Parse(_) => "PARSE",
            Error::Internal(_) => "INTERNAL",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }
}

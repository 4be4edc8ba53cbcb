use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// `Indeterminate` interval results are not errors; they are ordinary
/// `None` values that callers answer by raising the precision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("logarithm of non-positive value {0}")]
    LogDomain(String),

    #[error("precision exhausted at {bits} bits while {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("continued fraction of rational value {value} has only {available} partial quotients")]
    RationalInput { value: String, available: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("height of zero is undefined")]
    ZeroHeight,

    #[error("oracle box holds {tuples} tuples, above the budget of {budget}")]
    CapTooLarge { tuples: u128, budget: u128 },

    #[error("log {b} / log {g} is rational; use the direct scan")]
    RationalTau { b: u64, g: u64 },

    #[error("invalid equation: {0}")]
    InvalidSpec(String),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: String, detail: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

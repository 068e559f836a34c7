use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("closure exceeds cap: more than {cap} elements generated")]
    ClosureExceedsCap { cap: usize },

    #[error(
        "subgroup is not normal: conjugating element {conjugator} by {by} leaves the subgroup"
    )]
    NotNormal { conjugator: u32, by: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("budget exceeded: estimated cost {estimated} exceeds budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input group is abelian")]
    AbelianInput,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("not a class-2 exponent-p group: {0}")]
    NotClass2ExponentP(String),

    /// A theorem validator found a counterexample. Carries the full report.
    #[error("theorem check failed: {0}")]
    Violation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

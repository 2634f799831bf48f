use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("predicate `{predicate}` used with arity {first} and arity {second}")]
    ArityConflict {
        predicate: String,
        first: usize,
        second: usize,
    },

    #[error("grounding would produce about {estimate} clause instances (cap {cap})")]
    GroundingTooLarge { estimate: u128, cap: u128 },

    #[error("{what} did not stabilize within {cap} iterations")]
    IterationCap { what: &'static str, cap: usize },

    #[error("base has {atoms} atoms, exhaustive search is capped at {cap}")]
    CapExceeded { atoms: usize, cap: usize },

    #[error("three-valued model is not total: `{atom}` is undefined")]
    NotTotal { atom: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot decode Cantor point: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

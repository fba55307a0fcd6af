use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter {letter} is outside the alphabet 0..{d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("prefix length {len} exceeds word length {word_len}")]
    PrefixOutOfRange { len: usize, word_len: usize },

    #[error("resource cap exceeded: {what} would reach {requested}, limit is {limit}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("power iteration did not converge in {steps} steps")]
    NonConvergent { steps: usize },

    #[error("substitution is not Pisot (dominant root {lambda:.6}, largest other modulus {other:.6})")]
    NotPisot { lambda: f64, other: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate cell: vertices {0} and {1} coincide")]
    DegenerateCell(usize, usize),

    #[error("word is not self-replicating: no convergence in {steps} steps")]
    NotSelfReplicating { steps: usize },

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum HcaError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid cell value {value} at index {index} (cells must be 0 or 1)")]
    InvalidCell { index: usize, value: u8 },

    #[error("invalid hex text: {0}")]
    InvalidHex(String),

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("key rejected: spatial entropy {entropy:.3} is below the acceptance threshold")]
    KeyRejected { entropy: f64 },

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("round {round} out of range for {rounds} rounds")]
    RoundOutOfRange { round: usize, rounds: usize },

    #[error("{what} exceeds the enumeration limit ({value} > {limit})")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("input too short: {len} bits, at least {min} required")]
    InputTooShort { len: usize, min: usize },

    #[error("malformed container: {0}")]
    Container(String),

    #[error("bad padding")]
    BadPadding,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HcaError>;

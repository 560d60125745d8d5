use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported base {0}: expected 2 or an odd integer >= 3")]
    InvalidBase(u64),

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("rewrite loop for {what} exceeded its step ceiling of {ceiling}")]
    StepLimit { what: String, ceiling: usize },

    #[error("term pool too large: {detail}")]
    PoolTooLarge { detail: String },

    #[error("search index grew past {limit} partial sums while searching k={k}")]
    SearchTooLarge { k: i128, limit: usize },

    #[error(
        "lambda monotonicity violated: k={k} has length {length} > h={h} before any k of length h"
    )]
    Monotonicity { k: i128, length: u32, h: u32 },

    #[error("lambda scan hit its ceiling {ceiling} without finding a value of length {h}")]
    ScanCeiling { ceiling: i128, h: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown set name {0:?}")]
    UnknownSet(String),

    #[error("claim registry error: {0}")]
    Registry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the caller's arguments rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::InvalidBase(_) | Error::Parse(_) | Error::UnknownSet(_)
        )
    }
}

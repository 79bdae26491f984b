use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank deficient: expected rank {expected}, found {rank}")]
    RankDeficient { expected: usize, rank: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("unsupported abandonment weight {0} (the dial architecture covers 1..=3)")]
    UnsupportedWeight(usize),

    #[error("dial engine already finished its schedule")]
    ScheduleExhausted,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

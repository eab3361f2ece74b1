use thiserror::Error;

use crate::card::CardValue;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {0} is outside 1..=13")]
    InvalidRank(u8),
    #[error("unrecognised card token {0:?}")]
    InvalidToken(String),
    #[error("deck length {0} is not a multiple of four")]
    DeckLength(usize),
    #[error("value {0} appears more than four times")]
    TooManyCopies(CardValue),
    #[error("deck is empty")]
    EmptyDeck,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("need at least two batches to estimate dispersion, got {0}")]
    TooFewBatches(usize),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

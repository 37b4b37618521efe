use thiserror::Error;

use crate::engine::RuleViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("corrupted state: {0}")]
    CorruptedState(String),

    #[error("illegal move by seat {seat}: {violation}")]
    IllegalMove { seat: usize, violation: RuleViolation },

    #[error("action index {0} is structurally invalid")]
    InvalidActionIndex(usize),

    #[error("move {0} cannot be expressed in the action catalog")]
    Inexpressible(String),

    #[error("mask allows no action")]
    EmptyMask,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite loss: {0}")]
    NonFiniteLoss(String),

    #[error("weight file: {0}")]
    Weights(String),

    #[error("replay mismatch: {0}")]
    Replay(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

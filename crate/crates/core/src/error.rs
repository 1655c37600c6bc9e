use thiserror::Error;

use crate::exactpoly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("rank mismatch: {what} expects {expected}, got {got}")]
    RankMismatch { what: &'static str, expected: usize, got: usize },
    #[error("arity mismatch: {what} expects {expected}, got {got}")]
    ArityMismatch { what: &'static str, expected: usize, got: usize },
    #[error("basis index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("slot {slot} invalid for arity {arity}")]
    BadSlot { slot: usize, arity: usize },
    #[error("input algebra is not associative: {0}")]
    NotAssociative(String),
    #[error("operator is not a twisted Rota-Baxter operator: {0}")]
    NotTrb(String),
    #[error("map is not invertible over Q[D]: {0}")]
    NotInvertible(String),
    #[error("cochain is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

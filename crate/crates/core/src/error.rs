use thiserror::Error;

use crate::arena::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("colour alphabet is empty")]
    EmptyAlphabet,
    #[error("{0} colours exceed the supported maximum of 64")]
    TooManyColours(usize),
    #[error("colour `{0}` declared twice")]
    DuplicateColour(String),
    #[error("unknown colour `{0}`")]
    UnknownColour(String),
    #[error("winning set {0} is not a subset of the alphabet")]
    NotASubset(String),
    #[error("`winning` lists the empty set but `empty_wins` is false")]
    InconsistentEmptySet,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArenaError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("unknown colour `{0}`")]
    UnknownColour(String),
    #[error("invalid probability `{0}`")]
    BadProbability(String),
    #[error("`{0}` is not a random state but has a distribution")]
    DeltaOnNonRandom(String),
    #[error("set is not δ-closed: random state `{0}` has a successor outside")]
    NotClosed(String),
    #[error("set is not live: state `{0}` has no successor inside")]
    NotLive(String),
    #[error("arena is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("illegal move from `{0}` to `{1}`")]
    IllegalMove(String, String),
    #[error("strategy undefined at state `{0}` with memory `{1}`")]
    Undefined(String, String),
    #[error("unknown memory state `{0}`")]
    UnknownMemory(String),
    #[error("memory set is empty")]
    EmptyMemory,
    #[error("memory state `{0}` declared twice")]
    DuplicateMemory(String),
    #[error("distribution at `{0}` is empty or does not sum to one")]
    BadDistribution(String),
    #[error("malformed strategy key `{0}` (expected `state|memory`)")]
    BadKey(String),
    #[error("`{0}` is not owned by the strategy's player")]
    WrongOwner(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("arena colours do not match the condition's alphabet")]
    AlphabetMismatch,
    #[error("Eve does not win almost-surely from state `{0}`")]
    NotWinningEverywhere(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("Pick gadget needs at least one colour")]
    EmptyChoice,
    #[error("branch does not belong to the cropped DAG")]
    BranchMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration needs {} candidates, above the bound of {bound}", fmt_count(*.count))]
    ResourceLimit { count: u128, bound: u128 },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Errors raised while reading or writing the JSON file formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{0}")]
    Other(String),
}

fn fmt_count(count: u128) -> String {
    if count == u128::MAX {
        "at least 2^128".into()
    } else {
        count.to_string()
    }
}

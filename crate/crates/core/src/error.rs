use thiserror::Error;

use crate::ids::{Coord, OptionId, StateId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HrlError {
    #[error("no option available in state {0}")]
    NoOptionAvailable(StateId),
    #[error("option {option} is not available in state {state}")]
    OptionNotAvailable { option: OptionId, state: StateId },
    #[error("misaligned lengths: {what} (expected {expected}, got {got})")]
    Misaligned {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("segment trace must contain at least one step")]
    EmptySegment,
    #[error("invalid cell {0}: not a free, unblocked cell")]
    InvalidCell(Coord),
    #[error("option construction failed: {0}")]
    OptionConstruction(String),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Map parsing and validation failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map is empty")]
    Empty,
    #[error("non-rectangular map: row {row} has width {width}, expected {expected}")]
    NonRectangular {
        row: usize,
        width: usize,
        expected: usize,
    },
    #[error("unsealed border at {0}")]
    UnsealedBorder(Coord),
    #[error("no free cells")]
    NoFreeCells,
    #[error("unknown map character {ch:?} at {at}")]
    UnknownChar { ch: char, at: Coord },
    #[error("missing hallway label {0}")]
    MissingHallway(char),
    #[error("duplicate hallway label {0}")]
    DuplicateHallway(char),
    #[error("hallway {label} at {at} must join exactly two rooms, joins {rooms}")]
    HallwayRooms { label: char, at: Coord, rooms: usize },
    #[error("free space is disconnected: {reached} of {total} free cells reachable")]
    Disconnected { reached: usize, total: usize },
    #[error("malformed PGM: {0}")]
    Pgm(String),
}

pub type Result<T, E = HrlError> = std::result::Result<T, E>;

use std::fmt;

use thiserror::Error;

use crate::game::{GameStatus, Move, Player};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a move was rejected by [`GameState::apply_move`](crate::GameState::apply_move).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IllegalReason {
    NoSuchPart,
    PartFull,
    NoFreshBudget,
    NoReusableColor,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IllegalReason::NoSuchPart => "part index out of range",
            IllegalReason::PartFull => "part is fully colored",
            IllegalReason::NoFreshBudget => "no fresh color left in the budget",
            IllegalReason::NoReusableColor => "part has no color to reuse",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid game state: {0}")]
    InvalidState(String),

    #[error("game is already decided: {0}")]
    Terminal(GameStatus),

    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: IllegalReason },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("strategy {strategy} is not applicable to K[{partition}]: {reason}")]
    Inapplicable {
        strategy: String,
        partition: String,
        reason: String,
    },

    #[error("strategy {strategy} cannot play for {side}")]
    WrongSide { strategy: String, side: Player },

    #[error("strategy {strategy} has no matching clause in this position")]
    NoClause { strategy: String },

    #[error("strategy {0} needs interactive input")]
    Interactive(String),

    #[error("color budget {budget} out of range 1..={n}")]
    BudgetOutOfRange { budget: u32, n: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("game aborted: {0}")]
    Aborted(String),
}

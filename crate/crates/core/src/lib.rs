//! Exact analysis of the coloring game on complete multipartite graphs.
//!
//! A position is tracked by counts only: for each part, how many vertices are
//! colored and with how many distinct colors. [`solver`] computes the game
//! chromatic number by memoized minimax over those counts, [`strategy`]
//! implements the fixed move rules for Alice and Bob, [`formulas`] holds the
//! closed forms and bounds, and [`harness`] ties them together into
//! simulations, guarantee checks and exhaustive scans.

pub mod error;
pub mod formulas;
pub mod game;
pub mod harness;
pub mod partition;
pub mod solver;
pub mod strategy;

pub use error::{Error, IllegalReason, Result};
pub use formulas::{bound_interval, bounds, uniform_formula_contradicted, uniform_chi_g, table1_chi_g, BoundKind, BoundReport, BoundSource, Table1};
pub use game::{ColorAction, GameState, GameStatus, LastMove, Move, PartState, Player};
pub use partition::{partitions_of, partitions_up_to, Partition};
pub use solver::{alice_wins, chi_g, restricted_value, Mode, RestrictedSearch, Solver, WinCache, WinVector};
pub use strategy::{decide, Decision, Memory, StrategyContext, StrategyId};

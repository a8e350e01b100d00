//! Count-based model of the coloring game on `K[r_1,...,r_k]`.
//!
//! Every vertex of one part is adjacent to every vertex outside it, so a color
//! placed in part `i` is forbidden everywhere else and stays legal inside `i`.
//! Legality therefore depends only on how many vertices of each part are
//! colored and how many distinct colors the part holds. Vertices and colors
//! are anonymous; a move is a part plus the choice between a fresh color and a
//! color already present in that part.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, IllegalReason, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

impl std::str::FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice" => Ok(Player::Alice),
            "bob" => Ok(Player::Bob),
            other => Err(Error::InvalidArgument(format!(
                "side must be `alice` or `bob`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorAction {
    Fresh,
    Reuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Move {
    pub part: usize,
    pub action: ColorAction,
}

impl Move {
    pub fn fresh(part: usize) -> Move {
        Move {
            part,
            action: ColorAction::Fresh,
        }
    }

    pub fn reuse(part: usize) -> Move {
        Move {
            part,
            action: ColorAction::Reuse,
        }
    }

    pub fn is_fresh(&self) -> bool {
        self.action == ColorAction::Fresh
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let action = match self.action {
            ColorAction::Fresh => "fresh",
            ColorAction::Reuse => "reuse",
        };
        write!(f, "(part{}, {action})", self.part)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GameStatus {
    Ongoing,
    AliceWon,
    BobWon,
}

impl fmt::Display for GameStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameStatus::Ongoing => "ongoing",
            GameStatus::AliceWon => "alice_won",
            GameStatus::BobWon => "bob_won",
        })
    }
}

/// Per-part progress.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartState {
    pub size: u32,
    pub colored: u32,
    pub distinct: u32,
    /// Who colored the first vertex; `None` while the part is uncolored.
    pub starter: Option<Player>,
}

impl PartState {
    pub fn empty(size: u32) -> Self {
        PartState {
            size,
            colored: 0,
            distinct: 0,
            starter: None,
        }
    }

    pub fn is_uncolored(&self) -> bool {
        self.colored == 0
    }

    /// Some but not all vertices colored.
    pub fn is_partial(&self) -> bool {
        self.colored > 0 && self.colored < self.size
    }

    pub fn is_full(&self) -> bool {
        self.colored == self.size
    }

    /// Number of vertices still uncolored.
    pub fn open(&self) -> u32 {
        self.size - self.colored
    }
}

/// The move that produced a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LastMove {
    pub part: usize,
    pub fresh: bool,
}

/// An annotated game position. Immutable; [`apply_move`](Self::apply_move)
/// returns a new value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    partition: Partition,
    parts: Vec<PartState>,
    budget: u32,
    used: u32,
    turn: Player,
    last_move: Option<LastMove>,
    move_count: u32,
}

impl GameState {
    /// Empty board with `budget` colors; Alice to move.
    pub fn new(partition: Partition, budget: u32) -> Self {
        let parts = partition.sizes().iter().map(|&r| PartState::empty(r)).collect();
        GameState {
            partition,
            parts,
            budget,
            used: 0,
            turn: Player::Alice,
            last_move: None,
            move_count: 0,
        }
    }

    /// Builds a mid-game position from per-part counts. The turn and the
    /// number of consumed colors are derived from the counts.
    pub fn from_parts(
        partition: Partition,
        budget: u32,
        parts: Vec<PartState>,
        last_move: Option<LastMove>,
    ) -> Result<Self> {
        if parts.len() != partition.k() {
            return Err(Error::InvalidState(format!(
                "{} part states for {} parts",
                parts.len(),
                partition.k()
            )));
        }
        let move_count = parts.iter().map(|p| p.colored).sum::<u32>();
        let used = parts.iter().map(|p| p.distinct).sum::<u32>();
        let state = GameState {
            partition,
            parts,
            budget,
            used,
            turn: if move_count % 2 == 0 {
                Player::Alice
            } else {
                Player::Bob
            },
            last_move,
            move_count,
        };
        state.check_invariants()?;
        Ok(state)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn parts(&self) -> &[PartState] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &PartState {
        &self.parts[i]
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    /// Colors consumed so far.
    pub fn used(&self) -> u32 {
        self.used
    }

    /// Fresh colors still available.
    pub fn remaining(&self) -> u32 {
        self.budget - self.used
    }

    pub fn turn(&self) -> Player {
        self.turn
    }

    pub fn last_move(&self) -> Option<LastMove> {
        self.last_move
    }

    pub fn move_count(&self) -> u32 {
        self.move_count
    }

    pub fn status(&self) -> GameStatus {
        if self.parts.iter().all(PartState::is_full) {
            GameStatus::AliceWon
        } else if self.used >= self.budget && self.parts.iter().any(PartState::is_uncolored) {
            // An unstarted part can only ever receive a fresh color.
            GameStatus::BobWon
        } else {
            GameStatus::Ongoing
        }
    }

    /// True once every part holds at least one colored vertex.
    pub fn fixing_move_played(&self) -> bool {
        self.parts.iter().all(|p| p.colored >= 1)
    }

    /// Legal moves ordered by part index, fresh before reuse.
    pub fn legal_moves(&self) -> Result<Vec<Move>> {
        let status = self.status();
        if status != GameStatus::Ongoing {
            return Err(Error::Terminal(status));
        }
        let mut moves = Vec::with_capacity(2 * self.parts.len());
        for (i, p) in self.parts.iter().enumerate() {
            if p.is_full() {
                continue;
            }
            if self.used < self.budget {
                moves.push(Move::fresh(i));
            }
            if p.distinct >= 1 {
                moves.push(Move::reuse(i));
            }
        }
        Ok(moves)
    }

    pub fn check_move(&self, mv: Move) -> Result<()> {
        let status = self.status();
        if status != GameStatus::Ongoing {
            return Err(Error::Terminal(status));
        }
        let illegal = |reason| Err(Error::IllegalMove { mv, reason });
        let Some(p) = self.parts.get(mv.part) else {
            return illegal(IllegalReason::NoSuchPart);
        };
        if p.is_full() {
            return illegal(IllegalReason::PartFull);
        }
        match mv.action {
            ColorAction::Fresh if self.used >= self.budget => illegal(IllegalReason::NoFreshBudget),
            ColorAction::Reuse if p.distinct == 0 => illegal(IllegalReason::NoReusableColor),
            _ => Ok(()),
        }
    }

    pub fn apply_move(&self, mv: Move) -> Result<GameState> {
        self.check_move(mv)?;
        let mut next = self.clone();
        let fresh = mv.is_fresh();
        let part = &mut next.parts[mv.part];
        if part.colored == 0 {
            part.starter = Some(self.turn);
        }
        part.colored += 1;
        if fresh {
            part.distinct += 1;
            next.used += 1;
        }
        next.turn = self.turn.opponent();
        next.move_count += 1;
        next.last_move = Some(LastMove {
            part: mv.part,
            fresh,
        });
        Ok(next)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidState(msg));
        for (i, p) in self.parts.iter().enumerate() {
            if p.size != self.partition.size(i) {
                return bad(format!("part {i} has size {} in a K[{}]", p.size, self.partition));
            }
            if !(p.distinct <= p.colored && p.colored <= p.size) {
                return bad(format!(
                    "part {i}: need distinct <= colored <= size, got {}/{}/{}",
                    p.distinct, p.colored, p.size
                ));
            }
            if (p.colored == 0) != (p.distinct == 0) {
                return bad(format!("part {i}: colored vertices without a color"));
            }
            if (p.colored == 0) != p.starter.is_none() {
                return bad(format!("part {i}: starter mark disagrees with colored count"));
            }
        }
        let used: u32 = self.parts.iter().map(|p| p.distinct).sum();
        if used != self.used {
            return bad(format!("used {} but parts hold {used} colors", self.used));
        }
        if self.used > self.budget {
            return bad(format!("used {} exceeds budget {}", self.used, self.budget));
        }
        let moves: u32 = self.parts.iter().map(|p| p.colored).sum();
        if moves != self.move_count {
            return bad(format!("move count {} but {moves} vertices colored", self.move_count));
        }
        if (self.turn == Player::Alice) != self.move_count.is_multiple_of(2) {
            return bad("turn does not match move parity".into());
        }
        if let Some(last) = self.last_move {
            if last.part >= self.parts.len() || self.parts[last.part].colored == 0 {
                return bad("last move points at an uncolored part".into());
            }
        }
        Ok(())
    }
}

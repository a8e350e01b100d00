//! Game transcripts and the play loop that produces them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{GameState, GameStatus, Move, Player};
use crate::partition::Partition;
use crate::strategy::{decide, Memory, StrategyContext, StrategyId};

/// Who controlled a side in a recorded game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agent {
    Strategy(StrategyId),
    /// Exhaustive search looking for a refutation.
    Adversary,
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agent::Strategy(id) => write!(f, "{id}"),
            Agent::Adversary => f.write_str("adversary"),
        }
    }
}

impl Serialize for Agent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecordedMove {
    pub mover: Player,
    pub part: usize,
    /// Concrete color: fresh colors are numbered 1, 2, ... in order of
    /// appearance, reuse takes the smallest color already in the part.
    pub color: u32,
    pub fresh: bool,
}

impl RecordedMove {
    pub fn as_move(&self) -> Move {
        if self.fresh {
            Move::fresh(self.part)
        } else {
            Move::reuse(self.part)
        }
    }
}

/// Concrete color bookkeeping alongside a count state.
#[derive(Clone, Debug, Default)]
pub struct Palette {
    per_part: Vec<BTreeSet<u32>>,
    next: u32,
}

impl Palette {
    pub fn new(k: usize) -> Self {
        Palette {
            per_part: vec![BTreeSet::new(); k],
            next: 1,
        }
    }

    pub fn colors(&self, part: usize) -> &BTreeSet<u32> {
        &self.per_part[part]
    }

    /// Concrete color for `mv`; must be called with legal moves only.
    pub fn assign(&mut self, mv: Move) -> u32 {
        let colors = &mut self.per_part[mv.part];
        if mv.is_fresh() {
            let c = self.next;
            self.next += 1;
            colors.insert(c);
            c
        } else {
            *colors.first().expect("reuse in a started part")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameRecord {
    pub partition: Partition,
    pub budget: u32,
    pub alice: Agent,
    pub bob: Agent,
    pub moves: Vec<RecordedMove>,
    pub outcome: GameStatus,
    /// Index into `moves` of the move after which every part was started.
    pub fixing_move: Option<usize>,
    pub colors_used: u32,
}

impl GameRecord {
    /// Records a complete game given as count moves.
    pub fn from_moves(
        partition: &Partition,
        budget: u32,
        alice: Agent,
        bob: Agent,
        moves: &[Move],
    ) -> Result<Self> {
        let mut builder = RecordBuilder::new(partition, budget);
        for &mv in moves {
            builder.push(mv)?;
        }
        builder.finish(alice, bob)
    }

    pub fn count_moves(&self) -> Vec<Move> {
        self.moves.iter().map(RecordedMove::as_move).collect()
    }

    /// Replays the transcript through the game rules and checks every
    /// annotation against the result.
    pub fn replay(&self) -> Result<GameState> {
        let mut state = GameState::new(self.partition.clone(), self.budget);
        let mut palette = Palette::new(self.partition.k());
        let mut fixing = None;
        let mismatch = |what: String| Err(Error::InvalidArgument(format!("record mismatch: {what}")));
        for (i, rec) in self.moves.iter().enumerate() {
            if rec.mover != state.turn() {
                return mismatch(format!("move {i} attributed to {} on {}'s turn", rec.mover, state.turn()));
            }
            let mv = rec.as_move();
            state = state.apply_move(mv)?;
            let color = palette.assign(mv);
            if color != rec.color {
                return mismatch(format!("move {i} colored {} but replay gives {color}", rec.color));
            }
            if fixing.is_none() && state.fixing_move_played() {
                fixing = Some(i);
            }
        }
        if state.status() != self.outcome {
            return mismatch(format!("outcome {} but replay ends {}", self.outcome, state.status()));
        }
        if fixing != self.fixing_move {
            return mismatch(format!("fixing move {:?} but replay gives {fixing:?}", self.fixing_move));
        }
        if state.used() != self.colors_used {
            return mismatch(format!("{} colors recorded, replay uses {}", self.colors_used, state.used()));
        }
        Ok(state)
    }

    /// One line per move, then the outcome.
    pub fn render(&self) -> String {
        let mut out = format!(
            "K[{}] with {} colors, alice={} bob={}\n",
            self.partition, self.budget, self.alice, self.bob
        );
        for (i, m) in self.moves.iter().enumerate() {
            let marker = if Some(i) == self.fixing_move { "  <- fixing move" } else { "" };
            out.push_str(&format!(
                "{:>3}. {:<5} part{} color {}{}{marker}\n",
                i + 1,
                m.mover,
                m.part,
                m.color,
                if m.fresh { " (new)" } else { "" },
            ));
        }
        out.push_str(&format!("outcome: {} ({} colors used)\n", self.outcome, self.colors_used));
        out
    }
}

/// Incrementally builds a [`GameRecord`] while a game is played.
#[derive(Clone, Debug)]
pub struct RecordBuilder {
    state: GameState,
    palette: Palette,
    moves: Vec<RecordedMove>,
    fixing_move: Option<usize>,
}

impl RecordBuilder {
    pub fn new(partition: &Partition, budget: u32) -> Self {
        RecordBuilder {
            state: GameState::new(partition.clone(), budget),
            palette: Palette::new(partition.k()),
            moves: Vec::new(),
            fixing_move: None,
        }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn push(&mut self, mv: Move) -> Result<RecordedMove> {
        let mover = self.state.turn();
        self.state = self.state.apply_move(mv)?;
        let rec = RecordedMove {
            mover,
            part: mv.part,
            color: self.palette.assign(mv),
            fresh: mv.is_fresh(),
        };
        if self.fixing_move.is_none() && self.state.fixing_move_played() {
            self.fixing_move = Some(self.moves.len());
        }
        self.moves.push(rec);
        Ok(rec)
    }

    pub fn finish(self, alice: Agent, bob: Agent) -> Result<GameRecord> {
        let outcome = self.state.status();
        if outcome == GameStatus::Ongoing {
            return Err(Error::InvalidArgument("game is not finished".into()));
        }
        Ok(GameRecord {
            partition: self.state.partition().clone(),
            budget: self.state.budget(),
            alice,
            bob,
            colors_used: self.state.used(),
            moves: self.moves,
            outcome,
            fixing_move: self.fixing_move,
        })
    }
}

/// Source of moves for the `human` strategy.
pub trait HumanInput {
    /// Picks one of `legal`; `None` aborts the game.
    fn pick(&mut self, state: &GameState, palette: &Palette, legal: &[Move]) -> Option<Move>;
}

/// Refuses to supply moves; used for non-interactive runs.
pub struct NoHuman;

impl HumanInput for NoHuman {
    fn pick(&mut self, _: &GameState, _: &Palette, _: &[Move]) -> Option<Move> {
        None
    }
}

fn check_setup(partition: &Partition, budget: u32, alice: StrategyId, bob: StrategyId) -> Result<()> {
    if budget == 0 || budget > partition.n() {
        return Err(Error::BudgetOutOfRange {
            budget,
            n: partition.n(),
        });
    }
    for (id, side) in [(alice, Player::Alice), (bob, Player::Bob)] {
        if !id.can_play(side) {
            return Err(Error::WrongSide {
                strategy: id.to_string(),
                side,
            });
        }
        if let Err(reason) = id.applicability(partition) {
            return Err(Error::Inapplicable {
                strategy: id.to_string(),
                partition: partition.to_string(),
                reason,
            });
        }
    }
    Ok(())
}

/// Plays a full game. `human` supplies moves for [`StrategyId::Human`]
/// sides; `observe` sees the position after every move.
pub fn play_game(
    partition: &Partition,
    budget: u32,
    alice: StrategyId,
    bob: StrategyId,
    human: &mut dyn HumanInput,
    observe: &mut dyn FnMut(&GameState, &Palette, &RecordedMove),
) -> Result<GameRecord> {
    check_setup(partition, budget, alice, bob)?;
    let mut builder = RecordBuilder::new(partition, budget);
    let mut memory: [Memory; 2] = [alice.initial_memory(partition), bob.initial_memory(partition)];
    while builder.state().status() == GameStatus::Ongoing {
        let state = builder.state().clone();
        let (id, slot) = match state.turn() {
            Player::Alice => (alice, 0),
            Player::Bob => (bob, 1),
        };
        let mv = if id == StrategyId::Human {
            let legal = state.legal_moves()?;
            match human.pick(&state, builder.palette(), &legal) {
                Some(mv) => mv,
                None => return Err(Error::Aborted(format!("no move supplied for {}", state.turn()))),
            }
        } else {
            let d = decide(id, &StrategyContext::new(&state, memory[slot]))?;
            memory[slot] = d.next_memory;
            d.chosen()
        };
        let rec = builder.push(mv)?;
        observe(builder.state(), builder.palette(), &rec);
    }
    builder.finish(Agent::Strategy(alice), Agent::Strategy(bob))
}

/// Deterministic playout between two non-interactive strategies. Random
/// strategies take their seed from the identifier (`random:<seed>`).
pub fn simulate(partition: &Partition, budget: u32, alice: StrategyId, bob: StrategyId) -> Result<GameRecord> {
    for id in [alice, bob] {
        if id == StrategyId::Human {
            return Err(Error::Interactive(id.to_string()));
        }
    }
    play_game(partition, budget, alice, bob, &mut NoHuman, &mut |_, _, _| {})
}

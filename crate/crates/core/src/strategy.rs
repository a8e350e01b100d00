//! Move-selection rules for Alice and Bob.
//!
//! Every rule is a priority list of clauses; the first clause that applies
//! yields the set of admissible moves ("pick any ..."). The deterministic
//! refinement takes the lowest part index from that set. Strategies that
//! look at more than the board (the fixed part of `A2`, the branch of the
//! composite rule) carry a small [`Memory`] value that is advanced each time
//! the owner moves and can be rebuilt from the transcript.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameState, GameStatus, Move, PartState, Player};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyId {
    A1,
    A2,
    A3,
    A1P,
    A2P,
    A3P,
    AComposite,
    B1,
    B1P,
    Random(u64),
    Human,
}

impl StrategyId {
    /// The rules that play for Alice.
    pub const ALICE_RULES: [StrategyId; 7] = [
        StrategyId::A1,
        StrategyId::A2,
        StrategyId::A3,
        StrategyId::A1P,
        StrategyId::A2P,
        StrategyId::A3P,
        StrategyId::AComposite,
    ];

    /// The rules that play for Bob.
    pub const BOB_RULES: [StrategyId; 2] = [StrategyId::B1, StrategyId::B1P];

    /// The side a rule is written for; `None` for the plumbing strategies.
    pub fn owner(&self) -> Option<Player> {
        use StrategyId::*;
        match self {
            A1 | A2 | A3 | A1P | A2P | A3P | AComposite => Some(Player::Alice),
            B1 | B1P => Some(Player::Bob),
            Random(_) | Human => None,
        }
    }

    pub fn can_play(&self, side: Player) -> bool {
        self.owner().is_none_or(|owner| owner == side)
    }

    /// `Ok` when the rule is defined for `partition`, otherwise the reason.
    pub fn applicability(&self, partition: &Partition) -> std::result::Result<(), String> {
        use StrategyId::*;
        match self {
            A2 | A2P => {
                if partition.k() < 2 {
                    Err("needs at least two parts".into())
                } else if !partition.has_part_of_size(3) {
                    Err("no part of size exactly 3".into())
                } else {
                    Ok(())
                }
            }
            A3 | A3P if partition.n().is_multiple_of(2) => Err("needs an odd number of vertices".into()),
            AComposite if !is_composite_shape(partition) => {
                Err("needs shape K[4,3,...,3,1,1] with at least three parts of size 3".into())
            }
            _ => Ok(()),
        }
    }

    pub fn is_applicable(&self, partition: &Partition) -> bool {
        self.applicability(partition).is_ok()
    }

    /// Whether the rule reads the previous move; search keys include it only then.
    pub fn consults_last_move(&self) -> bool {
        use StrategyId::*;
        matches!(self, A2 | A3 | A2P | A3P | AComposite | B1 | B1P)
    }

    pub fn initial_memory(&self, partition: &Partition) -> Memory {
        match self {
            StrategyId::A2 | StrategyId::A2P => Memory::Target {
                part: first_part_of_size(partition, 3).unwrap_or(0),
                opened: false,
            },
            StrategyId::AComposite => Memory::Composite(CompositePhase::Open),
            _ => Memory::Stateless,
        }
    }
}

/// `K[4,3,...,3,1,1]` with at least three triples.
fn is_composite_shape(p: &Partition) -> bool {
    let s = p.sizes();
    s.len() >= 6
        && s[0] == 4
        && s[s.len() - 2..] == [1, 1]
        && s[1..s.len() - 2].iter().all(|&r| r == 3)
}

fn first_part_of_size(p: &Partition, size: u32) -> Option<usize> {
    p.sizes().iter().position(|&r| r == size)
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyId::A1 => f.write_str("a1"),
            StrategyId::A2 => f.write_str("a2"),
            StrategyId::A3 => f.write_str("a3"),
            StrategyId::A1P => f.write_str("a1p"),
            StrategyId::A2P => f.write_str("a2p"),
            StrategyId::A3P => f.write_str("a3p"),
            StrategyId::AComposite => f.write_str("acomposite"),
            StrategyId::B1 => f.write_str("b1"),
            StrategyId::B1P => f.write_str("b1p"),
            StrategyId::Random(seed) => write!(f, "random:{seed}"),
            StrategyId::Human => f.write_str("human"),
        }
    }
}

impl serde::Serialize for StrategyId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a1" => StrategyId::A1,
            "a2" => StrategyId::A2,
            "a3" => StrategyId::A3,
            "a1p" => StrategyId::A1P,
            "a2p" => StrategyId::A2P,
            "a3p" => StrategyId::A3P,
            "acomposite" => StrategyId::AComposite,
            "b1" => StrategyId::B1,
            "b1p" => StrategyId::B1P,
            "human" => StrategyId::Human,
            other => match other.strip_prefix("random:").map(str::parse::<u64>) {
                Some(Ok(seed)) => StrategyId::Random(seed),
                _ => return Err(Error::UnknownStrategy(other.to_string())),
            },
        })
    }
}

/// History a rule keeps beyond the board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Memory {
    Stateless,
    /// `A2`-style play around a fixed triple; `opened` once the first move is made.
    Target { part: usize, opened: bool },
    Composite(CompositePhase),
}

/// Branch of the composite rule on `K[4,3,...,3,1,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompositePhase {
    /// Alice has not moved.
    Open,
    /// Alice colored a singleton; Bob's first reply decides the branch.
    AwaitFirstReply,
    /// Bob and Alice both played in the 4-part.
    AwaitSecondReply,
    /// Alice completed the 4-part after Bob's second move there.
    AwaitThirdReply,
    /// Play is handed to a simpler rule for the rest of the game.
    Delegate {
        rule: DelegateRule,
        target: usize,
        opened: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelegateRule {
    A1P,
    A2,
    A2P,
}

/// What a strategy sees when asked to move.
#[derive(Clone, Copy, Debug)]
pub struct StrategyContext<'a> {
    pub state: &'a GameState,
    pub memory: Memory,
}

impl<'a> StrategyContext<'a> {
    pub fn new(state: &'a GameState, memory: Memory) -> Self {
        StrategyContext { state, memory }
    }

    /// Context at the start of a game.
    pub fn initial(id: StrategyId, state: &'a GameState) -> Self {
        StrategyContext {
            state,
            memory: id.initial_memory(state.partition()),
        }
    }
}

/// Output of a rule: the clause that fired, every move it admits (the
/// deterministic choice first), and the memory after the owner moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub clause: &'static str,
    pub moves: Vec<Move>,
    pub next_memory: Memory,
}

impl Decision {
    pub fn chosen(&self) -> Move {
        self.moves[0]
    }
}

pub fn is_applicable(id: StrategyId, partition: &Partition) -> bool {
    id.is_applicable(partition)
}

pub fn choose_move(id: StrategyId, ctx: &StrategyContext<'_>) -> Result<Move> {
    decide(id, ctx).map(|d| d.chosen())
}

pub fn admissible_moves(id: StrategyId, ctx: &StrategyContext<'_>) -> Result<Vec<Move>> {
    decide(id, ctx).map(|d| d.moves)
}

/// Evaluates the rule's priority list in `ctx`.
pub fn decide(id: StrategyId, ctx: &StrategyContext<'_>) -> Result<Decision> {
    let s = ctx.state;
    let status = s.status();
    if status != GameStatus::Ongoing {
        return Err(Error::Terminal(status));
    }
    if !id.can_play(s.turn()) {
        return Err(Error::WrongSide {
            strategy: id.to_string(),
            side: s.turn(),
        });
    }
    if let Err(reason) = id.applicability(s.partition()) {
        return Err(Error::Inapplicable {
            strategy: id.to_string(),
            partition: s.partition().to_string(),
            reason,
        });
    }

    let no_clause = || Error::NoClause {
        strategy: id.to_string(),
    };
    let (rule, next_memory) = match (id, ctx.memory) {
        (StrategyId::A1, _) => (a1(s, false), Memory::Stateless),
        (StrategyId::A1P, _) => (a1(s, true), Memory::Stateless),
        (StrategyId::A2 | StrategyId::A2P, Memory::Target { part, opened }) => (
            a2(s, part, opened, id == StrategyId::A2P),
            Memory::Target { part, opened: true },
        ),
        (StrategyId::A3, _) => (a3(s, false), Memory::Stateless),
        (StrategyId::A3P, _) => (a3(s, true), Memory::Stateless),
        (StrategyId::AComposite, Memory::Composite(phase)) => {
            let (rule, phase) = composite(s, phase)?;
            (rule, Memory::Composite(phase))
        }
        (StrategyId::B1, _) => (b1(s, false), Memory::Stateless),
        (StrategyId::B1P, _) => (b1(s, true), Memory::Stateless),
        (StrategyId::Random(seed), _) => (Some(random(s, seed)), Memory::Stateless),
        (StrategyId::Human, _) => return Err(Error::Interactive(id.to_string())),
        (_, memory) => {
            return Err(Error::InvalidArgument(format!(
                "memory {memory:?} does not belong to strategy {id}"
            )))
        }
    };
    let (clause, moves) = rule.ok_or_else(no_clause)?;
    if moves.is_empty() {
        return Err(no_clause());
    }
    debug_assert!(moves.iter().all(|&m| s.check_move(m).is_ok()), "{id} proposed an illegal move");
    Ok(Decision {
        clause,
        moves,
        next_memory,
    })
}

/// Rebuilds the strategy memory after `moves`, checking that every move the
/// owner made was admissible.
pub fn replay_memory(
    id: StrategyId,
    side: Player,
    partition: &Partition,
    budget: u32,
    moves: &[Move],
) -> Result<Memory> {
    let mut state = GameState::new(partition.clone(), budget);
    let mut memory = id.initial_memory(partition);
    for &mv in moves {
        if state.turn() == side && id.owner().is_some() {
            let d = decide(id, &StrategyContext::new(&state, memory))?;
            if !d.moves.contains(&mv) {
                return Err(Error::InvalidArgument(format!(
                    "move {mv} is not admissible for {id} (clause {})",
                    d.clause
                )));
            }
            memory = d.next_memory;
        }
        state = state.apply_move(mv)?;
    }
    Ok(memory)
}

type Rule = (&'static str, Vec<Move>);

fn indices(s: &GameState, pred: impl Fn(&PartState) -> bool) -> Vec<usize> {
    s.parts()
        .iter()
        .enumerate()
        .filter(|(_, p)| pred(p))
        .map(|(i, _)| i)
        .collect()
}

fn fresh_in(parts: Vec<usize>) -> Vec<Move> {
    parts.into_iter().map(Move::fresh).collect()
}

fn reuse_in(parts: Vec<usize>) -> Vec<Move> {
    parts.into_iter().map(Move::reuse).collect()
}

fn nonempty(clause: &'static str, moves: Vec<Move>) -> Option<Rule> {
    (!moves.is_empty()).then_some((clause, moves))
}

/// Parts maximizing (or minimizing) `key` among `parts`.
fn extreme_by(parts: Vec<usize>, key: impl Fn(usize) -> u32, largest: bool) -> Vec<usize> {
    let best = if largest {
        parts.iter().map(|&i| key(i)).max()
    } else {
        parts.iter().map(|&i| key(i)).min()
    };
    match best {
        Some(best) => parts.into_iter().filter(|&i| key(i) == best).collect(),
        None => parts,
    }
}

/// "If there is an uncolored singleton, color it with a new color."
fn singleton_rule(s: &GameState) -> Option<Rule> {
    if s.remaining() == 0 {
        return None;
    }
    nonempty(
        "singleton",
        fresh_in(indices(s, |p| p.size == 1 && p.is_uncolored())),
    )
}

fn start_uncolored(s: &GameState, clause: &'static str) -> Option<Rule> {
    if s.remaining() == 0 {
        return None;
    }
    nonempty(clause, fresh_in(indices(s, PartState::is_uncolored)))
}

fn reuse_partial(s: &GameState, clause: &'static str) -> Option<Rule> {
    nonempty(clause, reuse_in(indices(s, PartState::is_partial)))
}

/// Bob's previous move, when it left the part with an uncolored vertex.
fn bob_reply_part(s: &GameState) -> Option<usize> {
    if s.move_count() == 0 {
        return None;
    }
    s.last_move()
        .map(|m| m.part)
        .filter(|&i| s.part(i).is_partial())
}

fn a1(s: &GameState, primed: bool) -> Option<Rule> {
    primed
        .then(|| singleton_rule(s))
        .flatten()
        .or_else(|| start_uncolored(s, "A1/1"))
        .or_else(|| reuse_partial(s, "A1/2"))
}

fn a2(s: &GameState, target: usize, opened: bool, primed: bool) -> Option<Rule> {
    let v = s.part(target);
    if !opened && v.is_uncolored() && s.remaining() > 0 {
        return Some(("A2/1", vec![Move::fresh(target)]));
    }
    if bob_reply_part(s) == Some(target) {
        return Some(("A2/2", vec![Move::reuse(target)]));
    }
    primed
        .then(|| singleton_rule(s))
        .flatten()
        .or_else(|| start_uncolored(s, "A2/3"))
        .or_else(|| reuse_partial(s, "A2/4"))
}

fn smallest_odd_uncolored(s: &GameState) -> Vec<usize> {
    let odd = indices(s, |p| p.is_uncolored() && p.size % 2 == 1);
    extreme_by(odd, |i| s.part(i).size, false)
}

fn a3(s: &GameState, primed: bool) -> Option<Rule> {
    if primed {
        if let Some(rule) = singleton_rule(s) {
            return Some(rule);
        }
    }
    if s.move_count() == 0 {
        return nonempty("A3/1", fresh_in(smallest_odd_uncolored(s)));
    }
    if let Some(i) = bob_reply_part(s) {
        return Some(("A3/2", vec![Move::reuse(i)]));
    }
    if let Some(rule) = reuse_partial(s, "A3/3") {
        return Some(rule);
    }
    if s.remaining() == 0 {
        return None;
    }
    nonempty("A3/4", fresh_in(smallest_odd_uncolored(s)))
}

fn b1(s: &GameState, primed: bool) -> Option<Rule> {
    let last = s.last_move()?;
    // New color whenever the budget allows, else a color already in the part.
    let act = |i: usize| {
        if s.remaining() > 0 {
            Some(Move::fresh(i))
        } else if s.part(i).distinct > 0 {
            Some(Move::reuse(i))
        } else {
            None
        }
    };
    let pick = |clause, parts: Vec<usize>| nonempty(clause, parts.into_iter().filter_map(act).collect());

    if s.part(last.part).is_partial() {
        return pick("B1/1", vec![last.part]);
    }
    let partial = indices(s, PartState::is_partial);
    if !partial.is_empty() {
        return pick("B1/2", extreme_by(partial, |i| s.part(i).open(), false));
    }
    let size = |i: usize| s.part(i).size;
    if !primed {
        return pick("B1/3", extreme_by(indices(s, PartState::is_uncolored), size, true));
    }
    let large = indices(s, |p| p.is_uncolored() && p.size >= 3);
    if !large.is_empty() {
        return pick("B1'/3", extreme_by(large, size, true));
    }
    pick("B1'/4", extreme_by(indices(s, PartState::is_uncolored), size, false))
}

fn composite(s: &GameState, phase: CompositePhase) -> Result<(Option<Rule>, CompositePhase)> {
    use CompositePhase::*;
    let first_triple = first_part_of_size(s.partition(), 3).expect("composite shape has triples");
    let bob_part = || {
        s.last_move().map(|m| m.part).ok_or_else(|| {
            Error::InvalidState("composite rule expected a previous move by Bob".into())
        })
    };
    let delegate = |rule, target, opened| {
        let r = match rule {
            DelegateRule::A1P => a1(s, true),
            DelegateRule::A2 => a2(s, target, opened, false),
            DelegateRule::A2P => a2(s, target, opened, true),
        };
        (
            r,
            Delegate {
                rule,
                target,
                opened: true,
            },
        )
    };
    let size = |i: usize| s.part(i).size;

    Ok(match phase {
        Open => (
            nonempty(
                "composite/singleton",
                fresh_in(indices(s, |p| p.size == 1 && p.is_uncolored())),
            ),
            AwaitFirstReply,
        ),
        AwaitFirstReply => {
            let b = bob_part()?;
            match size(b) {
                // Bob took the other singleton: A2 on what is left.
                1 => delegate(DelegateRule::A2, first_triple, false),
                // Bob opened a triple: it plays the role of A2's first move.
                3 => (
                    singleton_rule(s).map(|(_, m)| ("composite/second-singleton", m)),
                    Delegate {
                        rule: DelegateRule::A2,
                        target: b,
                        opened: true,
                    },
                ),
                _ => (Some(("composite/big", vec![Move::reuse(b)])), AwaitSecondReply),
            }
        }
        AwaitSecondReply => {
            let b = bob_part()?;
            if size(b) == 4 && s.part(b).is_partial() {
                (Some(("composite/big-close", vec![Move::reuse(b)])), AwaitThirdReply)
            } else {
                delegate(DelegateRule::A1P, 0, true)
            }
        }
        AwaitThirdReply => {
            let b = bob_part()?;
            if size(b) == 3 {
                delegate(DelegateRule::A2P, b, true)
            } else {
                delegate(DelegateRule::A2P, first_triple, false)
            }
        }
        Delegate {
            rule,
            target,
            opened,
        } => delegate(rule, target, opened),
    })
}

/// Uniform choice among legal moves, derived from the seed and the position
/// so the same game replays identically.
fn random(s: &GameState, seed: u64) -> Rule {
    let moves = s.legal_moves().unwrap_or_default();
    let mut h = splitmix(seed ^ 0x636f_6c6f_7269_6e67);
    h = splitmix(h ^ u64::from(s.remaining()));
    for p in s.parts() {
        h = splitmix(h ^ (u64::from(p.colored) << 32 | u64::from(p.distinct)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    let pick = if moves.is_empty() {
        Vec::new()
    } else {
        vec![moves[rng.gen_range(0..moves.len())]]
    };
    ("random", pick)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

//! Exact game values by memoized minimax over count states.
//!
//! Positions are keyed by [`CanonicalKey`]: the sorted multiset of per-part
//! counts, the number of fresh colors left and the side to move. The key
//! holds the remaining budget rather than the budget itself, so one table
//! serves every palette size of a partition.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ColorAction, GameState, GameStatus, Move, Player};
use crate::partition::Partition;
use crate::strategy::{decide, Memory, StrategyContext, StrategyId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartKey {
    pub size: u8,
    pub colored: u8,
    pub distinct: u8,
    pub starter: Option<Player>,
}

/// Symmetry-reduced fingerprint of a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub parts: Vec<PartKey>,
    pub remaining: u32,
    pub turn: Player,
}

fn key_with(state: &GameState, starters: bool) -> CanonicalKey {
    let mut parts: Vec<PartKey> = state
        .parts()
        .iter()
        .map(|p| PartKey {
            size: p.size as u8,
            colored: p.colored as u8,
            distinct: p.distinct as u8,
            starter: if starters { p.starter } else { None },
        })
        .collect();
    parts.sort_unstable();
    CanonicalKey {
        parts,
        remaining: state.remaining(),
        turn: state.turn(),
    }
}

/// Key invariant under permutations of equal-size parts and relabeling of colors.
pub fn canonicalize(state: &GameState) -> CanonicalKey {
    key_with(state, false)
}

/// As [`canonicalize`], additionally keeping who started each part.
pub fn canonicalize_annotated(state: &GameState) -> CanonicalKey {
    key_with(state, true)
}

/// Search order: fresh colors first, then reuse; lower part index first.
fn ordered_moves(state: &GameState) -> Vec<Move> {
    let mut moves = state.legal_moves().unwrap_or_default();
    moves.sort_by_key(|m| (m.action != ColorAction::Fresh, m.part));
    moves
}

fn check_budget(partition: &Partition, t: u32) -> Result<()> {
    if t == 0 || t > partition.n() {
        return Err(Error::BudgetOutOfRange {
            budget: t,
            n: partition.n(),
        });
    }
    Ok(())
}

/// Full minimax with a transposition table.
#[derive(Debug, Default)]
pub struct Solver {
    memo: FxHashMap<CanonicalKey, bool>,
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of positions stored.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Whether Alice wins from `state` under optimal play by both sides.
    pub fn evaluate(&mut self, state: &GameState) -> bool {
        match state.status() {
            GameStatus::AliceWon => return true,
            GameStatus::BobWon => return false,
            GameStatus::Ongoing => {}
        }
        let key = canonicalize(state);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let moves = ordered_moves(state);
        let mut child = |m: &Move| {
            let next = state.apply_move(*m).expect("legal move");
            self.evaluate(&next)
        };
        let value = match state.turn() {
            Player::Alice => moves.iter().any(&mut child),
            Player::Bob => moves.iter().all(&mut child),
        };
        self.memo.insert(key, value);
        value
    }

    pub fn alice_wins(&mut self, partition: &Partition, t: u32) -> Result<bool> {
        check_budget(partition, t)?;
        Ok(self.evaluate(&GameState::new(partition.clone(), t)))
    }

    /// Outcome for every palette size `1..=n`.
    pub fn win_vector(&mut self, partition: &Partition) -> WinVector {
        let wins = (1..=partition.n())
            .map(|t| self.evaluate(&GameState::new(partition.clone(), t)))
            .collect();
        WinVector {
            partition: partition.clone(),
            wins,
        }
    }
}

/// Whether Alice has a winning strategy on `partition` with exactly `t` colors.
pub fn alice_wins(partition: &Partition, t: u32) -> Result<bool> {
    Solver::new().alice_wins(partition, t)
}

/// Game chromatic number together with the full win vector.
pub fn chi_g(partition: &Partition) -> WinVector {
    Solver::new().win_vector(partition)
}

/// Alice's outcome under optimal play for each palette size `t` in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WinVector {
    partition: Partition,
    wins: Vec<bool>,
}

impl WinVector {
    pub fn new(partition: Partition, wins: Vec<bool>) -> Result<Self> {
        if wins.len() != partition.n() as usize {
            return Err(Error::InvalidArgument(format!(
                "win vector for K[{partition}] needs {} entries, got {}",
                partition.n(),
                wins.len()
            )));
        }
        if !wins.last().copied().unwrap_or(false) {
            return Err(Error::InvalidArgument(
                "Alice always wins with as many colors as vertices".into(),
            ));
        }
        Ok(WinVector { partition, wins })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Entry `t - 1` is the outcome with `t` colors.
    pub fn wins(&self) -> &[bool] {
        &self.wins
    }

    pub fn alice_wins(&self, t: u32) -> bool {
        t >= 1 && self.wins.get(t as usize - 1).copied().unwrap_or(t > 0)
    }

    /// Smallest winning palette size.
    pub fn chi_g(&self) -> u32 {
        self.wins
            .iter()
            .position(|&w| w)
            .map(|i| i as u32 + 1)
            .expect("Alice wins with n colors")
    }

    /// Palette sizes above `chi_g` where Alice loses.
    pub fn anomalies(&self) -> Vec<u32> {
        let chi = self.chi_g();
        (chi + 1..=self.partition.n())
            .filter(|&t| !self.alice_wins(t))
            .collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.anomalies().is_empty()
    }

    /// Outcomes for `t = k..=n` as `0`/`1` characters.
    pub fn bitstring(&self) -> String {
        let k = self.partition.k();
        self.wins[k - 1..]
            .iter()
            .map(|&w| if w { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`bitstring`](Self::bitstring); sizes below `k` lose.
    pub fn from_bitstring(partition: Partition, bits: &str) -> Result<Self> {
        let k = partition.k();
        let n = partition.n() as usize;
        if bits.len() != n + 1 - k {
            return Err(Error::InvalidArgument(format!(
                "bitstring for K[{partition}] needs {} characters, got {}",
                n + 1 - k,
                bits.len()
            )));
        }
        let mut wins = vec![false; k - 1];
        for c in bits.chars() {
            wins.push(match c {
                '0' => false,
                '1' => true,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unexpected character `{other}` in bitstring"
                    )))
                }
            });
        }
        WinVector::new(partition, wins)
    }
}

impl fmt::Display for WinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[{}]: chi_g={} wins(k..n)={}", self.partition, self.chi_g(), self.bitstring())
    }
}

/// How a fixed strategy's "pick any" freedom is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Lowest-index refinement only.
    Deterministic,
    /// Every admissible move must succeed.
    Universal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RestrictedKey {
    parts: Vec<(u8, u8, u8)>,
    remaining: u32,
    turn: Player,
    last: Option<u8>,
    memory: Memory,
}

/// Minimax where `side` follows a fixed strategy and the opponent searches
/// every legal move.
///
/// Deterministic refinements break ties by part index, which is not invariant
/// under swapping equal-size parts, so keys keep parts in index order.
#[derive(Debug)]
pub struct RestrictedSearch {
    partition: Partition,
    side: Player,
    strategy: StrategyId,
    mode: Mode,
    memo: FxHashMap<RestrictedKey, bool>,
}

impl RestrictedSearch {
    pub fn new(partition: Partition, side: Player, strategy: StrategyId, mode: Mode) -> Result<Self> {
        if strategy == StrategyId::Human {
            return Err(Error::Interactive(strategy.to_string()));
        }
        if !strategy.can_play(side) {
            return Err(Error::WrongSide {
                strategy: strategy.to_string(),
                side,
            });
        }
        if let Err(reason) = strategy.applicability(&partition) {
            return Err(Error::Inapplicable {
                strategy: strategy.to_string(),
                partition: partition.to_string(),
                reason,
            });
        }
        Ok(RestrictedSearch {
            partition,
            side,
            strategy,
            mode,
            memo: FxHashMap::default(),
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn side(&self) -> Player {
        self.side
    }

    pub fn strategy(&self) -> StrategyId {
        self.strategy
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn key(&self, state: &GameState, memory: Memory) -> RestrictedKey {
        RestrictedKey {
            parts: state
                .parts()
                .iter()
                .map(|p| (p.size as u8, p.colored as u8, p.distinct as u8))
                .collect(),
            remaining: state.remaining(),
            turn: state.turn(),
            last: if self.strategy.consults_last_move() {
                state.last_move().map(|m| m.part as u8)
            } else {
                None
            },
            memory,
        }
    }

    fn goal(&self, status: GameStatus) -> bool {
        match self.side {
            Player::Alice => status == GameStatus::AliceWon,
            Player::Bob => status == GameStatus::BobWon,
        }
    }

    /// Moves the fixed side may make, each with the memory that follows it.
    fn own_moves(&self, state: &GameState, memory: Memory) -> Result<(Vec<Move>, Memory)> {
        let d = decide(self.strategy, &StrategyContext::new(state, memory))?;
        let moves = match self.mode {
            Mode::Deterministic => vec![d.chosen()],
            Mode::Universal => d.moves,
        };
        Ok((moves, d.next_memory))
    }

    /// Whether the fixed side reaches its goal from `state` against every reply.
    pub fn evaluate(&mut self, state: &GameState, memory: Memory) -> Result<bool> {
        let status = state.status();
        if status != GameStatus::Ongoing {
            return Ok(self.goal(status));
        }
        let key = self.key(state, memory);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let value = if state.turn() == self.side {
            let (moves, next_memory) = self.own_moves(state, memory)?;
            let mut ok = true;
            for m in moves {
                if !self.evaluate(&state.apply_move(m)?, next_memory)? {
                    ok = false;
                    break;
                }
            }
            ok
        } else {
            let mut ok = true;
            for m in ordered_moves(state) {
                if !self.evaluate(&state.apply_move(m)?, memory)? {
                    ok = false;
                    break;
                }
            }
            ok
        };
        self.memo.insert(key, value);
        Ok(value)
    }

    /// Whether the fixed side reaches its goal with exactly `t` colors.
    pub fn value(&mut self, t: u32) -> Result<bool> {
        check_budget(&self.partition, t)?;
        let state = GameState::new(self.partition.clone(), t);
        let memory = self.strategy.initial_memory(&self.partition);
        self.evaluate(&state, memory)
    }

    /// The first line, in search order, on which the fixed side fails;
    /// `None` when it succeeds against everything.
    pub fn failing_line(&mut self, t: u32) -> Result<Option<Vec<Move>>> {
        if self.value(t)? {
            return Ok(None);
        }
        let mut state = GameState::new(self.partition.clone(), t);
        let mut memory = self.strategy.initial_memory(&self.partition);
        let mut line = Vec::new();
        while state.status() == GameStatus::Ongoing {
            let (candidates, next_memory) = if state.turn() == self.side {
                self.own_moves(&state, memory)?
            } else {
                (ordered_moves(&state), memory)
            };
            let mut chosen = None;
            for m in candidates {
                let next = state.apply_move(m)?;
                if !self.evaluate(&next, next_memory)? {
                    chosen = Some((m, next));
                    break;
                }
            }
            let (m, next) = chosen.expect("a losing position has a losing continuation");
            line.push(m);
            state = next;
            memory = next_memory;
        }
        Ok(Some(line))
    }
}

/// Outcome of `strategy` playing for `side` against an exhaustive opponent.
pub fn restricted_value(
    partition: &Partition,
    t: u32,
    side: Player,
    strategy: StrategyId,
    mode: Mode,
) -> Result<bool> {
    RestrictedSearch::new(partition.clone(), side, strategy, mode)?.value(t)
}

/// On-disk table of win vectors, one `partition;chi_g;bits` record per line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WinCache {
    entries: BTreeMap<Partition, WinVector>,
}

impl WinCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cache = WinCache::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Cache(format!("line {}: {msg}", lineno + 1));
            let fields: Vec<&str> = line.split(';').collect();
            let [partition, chi, bits] = fields[..] else {
                return Err(bad(format!("expected 3 fields, got {}", fields.len())));
            };
            let partition: Partition = partition.parse().map_err(|e: Error| bad(e.to_string()))?;
            let chi: u32 = chi.parse().map_err(|_| bad(format!("bad chi_g `{chi}`")))?;
            let wv = WinVector::from_bitstring(partition.clone(), bits)
                .map_err(|e| bad(e.to_string()))?;
            if wv.chi_g() != chi {
                return Err(bad(format!("chi_g {chi} disagrees with bitstring {bits}")));
            }
            cache.entries.insert(partition, wv);
        }
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
        }
    }

    pub fn render(&self) -> String {
        self.entries
            .values()
            .map(|wv| format!("{};{};{}\n", wv.partition(), wv.chi_g(), wv.bitstring()))
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    pub fn get(&self, partition: &Partition) -> Option<&WinVector> {
        self.entries.get(partition)
    }

    pub fn insert(&mut self, wv: WinVector) {
        self.entries.insert(wv.partition().clone(), wv);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached vector, or a fresh solve that is then stored.
    pub fn get_or_solve(&mut self, partition: &Partition) -> WinVector {
        if let Some(wv) = self.entries.get(partition) {
            return wv.clone();
        }
        let wv = chi_g(partition);
        self.insert(wv.clone());
        wv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        assert!(alice_wins(&k("2,2"), 3).unwrap());
        assert!(!alice_wins(&k("2,2"), 2).unwrap());
        assert!(alice_wins(&k("1"), 1).unwrap());
        assert!(alice_wins(&k("3,3,3"), 4).unwrap());
        assert!(!alice_wins(&k("3,3,3"), 3).unwrap());
        assert!(alice_wins(&k("2,2"), 0).is_err());
        assert!(alice_wins(&k("2,2"), 5).is_err());
    }

    #[test]
    fn chi_g_examples() {
        assert_eq!(chi_g(&k("5,5,1")).chi_g(), 3);
        assert_eq!(chi_g(&k("2,2,1,1")).chi_g(), 5);
        assert_eq!(chi_g(&k("3,2,2")).chi_g(), 4);
        assert_eq!(chi_g(&k("4,4")).chi_g(), 3);
    }

    #[test]
    fn key_ignores_part_order_and_color_names() {
        let p = k("4,4,2");
        let a = GameState::new(p.clone(), 6)
            .apply_move(Move::fresh(0))
            .unwrap()
            .apply_move(Move::fresh(1))
            .unwrap()
            .apply_move(Move::reuse(1))
            .unwrap();
        let b = GameState::new(p, 6)
            .apply_move(Move::fresh(1))
            .unwrap()
            .apply_move(Move::fresh(0))
            .unwrap()
            .apply_move(Move::reuse(0))
            .unwrap();
        assert_ne!(a, b);
        assert_eq!(canonicalize(&a), canonicalize(&b));
        assert_eq!(canonicalize_annotated(&a), canonicalize_annotated(&b));
    }

    #[test]
    fn annotated_key_tracks_starters() {
        let p = k("4,2");
        let a = GameState::new(p.clone(), 4)
            .apply_move(Move::fresh(0))
            .unwrap()
            .apply_move(Move::fresh(1))
            .unwrap();
        let b = GameState::new(p, 4)
            .apply_move(Move::fresh(1))
            .unwrap()
            .apply_move(Move::fresh(0))
            .unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&b));
        assert_ne!(canonicalize_annotated(&a), canonicalize_annotated(&b));
    }

    #[test]
    fn key_depends_on_turn() {
        let p = k("3,3");
        let s = GameState::new(p.clone(), 4);
        let mut key = canonicalize(&s);
        key.turn = Player::Bob;
        assert_ne!(canonicalize(&s), key);
    }

    #[test]
    fn bitstring_round_trip() {
        let wv = chi_g(&k("3,2,2"));
        assert_eq!(wv.bitstring(), "01111");
        let back = WinVector::from_bitstring(k("3,2,2"), &wv.bitstring()).unwrap();
        assert_eq!(back, wv);
        assert!(WinVector::from_bitstring(k("3,2,2"), "0111").is_err());
        assert!(WinVector::from_bitstring(k("3,2,2"), "01110").is_err());
    }

    #[test]
    fn cache_round_trip() {
        let mut cache = WinCache::new();
        cache.insert(chi_g(&k("3,3,3")));
        cache.insert(chi_g(&k("2,2")));
        let text = cache.render();
        assert_eq!(text, "2,2;3;011\n3,3,3;4;0111111\n");
        assert_eq!(WinCache::parse(&text).unwrap(), cache);
        assert!(WinCache::parse("2,2;2;011\n").is_err());
        assert!(WinCache::parse("2,2;3\n").is_err());
    }

    #[test]
    fn restricted_examples() {
        let r = |p: &str, t, side, id| restricted_value(&k(p), t, side, id, Mode::Deterministic).unwrap();
        assert!(r("4,4,4", 5, Player::Alice, StrategyId::A1));
        assert!(r("4,4,4", 4, Player::Bob, StrategyId::B1));
        assert!(r("3,3,3", 4, Player::Alice, StrategyId::A2));
        assert!(r("3,2,2", 4, Player::Alice, StrategyId::A3));
    }

    #[test]
    fn restricted_rejects_bad_setup() {
        let p = k("2,2");
        assert!(matches!(
            RestrictedSearch::new(p.clone(), Player::Bob, StrategyId::A1, Mode::Deterministic),
            Err(Error::WrongSide { .. })
        ));
        assert!(matches!(
            RestrictedSearch::new(p.clone(), Player::Alice, StrategyId::A3, Mode::Deterministic),
            Err(Error::Inapplicable { .. })
        ));
        assert!(matches!(
            RestrictedSearch::new(p, Player::Alice, StrategyId::Human, Mode::Deterministic),
            Err(Error::Interactive(_))
        ));
    }

    #[test]
    fn failing_line_ends_in_a_loss() {
        let p = k("4,4,4");
        let mut search = RestrictedSearch::new(p.clone(), Player::Alice, StrategyId::A1, Mode::Deterministic).unwrap();
        assert_eq!(search.failing_line(5).unwrap(), None);
        let line = search.failing_line(4).unwrap().expect("A1 loses with 4 colors");
        let end = line
            .iter()
            .fold(GameState::new(p, 4), |s, &m| s.apply_move(m).unwrap());
        assert_eq!(end.status(), GameStatus::BobWon);
    }
}

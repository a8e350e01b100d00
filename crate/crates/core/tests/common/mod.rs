//! Test support: a vertex-level model of the game that shares no code with
//! the count-based engine, plus helpers for random playouts.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use chroma_core::{GameState, GameStatus, LastMove, Move, PartState, Partition, Player};

/// A board where every vertex is named and carries a concrete color.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    /// Part index of each vertex.
    pub part_of: Vec<usize>,
    /// Color of each vertex, 0 when uncolored.
    pub colors: Vec<u32>,
    /// Who colored each vertex.
    pub by: Vec<Option<Player>>,
    pub budget: u32,
    /// Part of the most recent move.
    pub last: Option<(usize, bool)>,
}

impl Board {
    pub fn new(p: &Partition, budget: u32) -> Self {
        let part_of: Vec<usize> = p
            .sizes()
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| std::iter::repeat_n(i, r as usize))
            .collect();
        let n = part_of.len();
        Board {
            part_of,
            colors: vec![0; n],
            by: vec![None; n],
            budget,
            last: None,
        }
    }

    pub fn k(&self) -> usize {
        self.part_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn colored(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }

    pub fn turn(&self) -> Player {
        if self.colored().is_multiple_of(2) {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    pub fn used(&self) -> BTreeSet<u32> {
        self.colors.iter().copied().filter(|&c| c != 0).collect()
    }

    /// Colors `v` may take: any palette color absent from its neighbours,
    /// i.e. from every other part.
    pub fn legal_colors(&self, v: usize) -> Vec<u32> {
        (1..=self.budget)
            .filter(|&c| {
                self.colors
                    .iter()
                    .zip(&self.part_of)
                    .all(|(&col, &part)| part == self.part_of[v] || col != c)
            })
            .collect()
    }

    pub fn status(&self) -> GameStatus {
        if self.colors.iter().all(|&c| c != 0) {
            return GameStatus::AliceWon;
        }
        let stuck = (0..self.colors.len()).any(|v| self.colors[v] == 0 && self.legal_colors(v).is_empty());
        if stuck {
            GameStatus::BobWon
        } else {
            GameStatus::Ongoing
        }
    }

    /// Legal (vertex, color) pairs. New colors are introduced in order, so
    /// only the smallest unused color is offered as a new one.
    pub fn moves(&self) -> Vec<(usize, u32)> {
        let used = self.used();
        let next_new = (1..=self.budget).find(|c| !used.contains(c));
        let mut out = Vec::new();
        for v in 0..self.colors.len() {
            if self.colors[v] != 0 {
                continue;
            }
            for c in self.legal_colors(v) {
                if used.contains(&c) || Some(c) == next_new {
                    out.push((v, c));
                }
            }
        }
        out
    }

    /// Every legal (vertex, color) pair, with no ordering convention.
    pub fn all_moves(&self) -> Vec<(usize, u32)> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == 0)
            .flat_map(|v| self.legal_colors(v).into_iter().map(move |c| (v, c)))
            .collect()
    }

    /// The count-level move a vertex move corresponds to.
    pub fn as_count_move(&self, (v, c): (usize, u32)) -> Move {
        let part = self.part_of[v];
        let in_part = self
            .colors
            .iter()
            .zip(&self.part_of)
            .any(|(&col, &p)| p == part && col == c);
        if in_part {
            Move::reuse(part)
        } else {
            Move::fresh(part)
        }
    }

    pub fn play(&self, (v, c): (usize, u32)) -> Board {
        let mv = self.as_count_move((v, c));
        let mut b = self.clone();
        b.by[v] = Some(self.turn());
        b.colors[v] = c;
        b.last = Some((mv.part, mv.is_fresh()));
        b
    }
}

/// A board that also remembers who started each part.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub board: Board,
    pub starters: Vec<Option<Player>>,
}

impl std::ops::Deref for Tracked {
    type Target = Board;
    fn deref(&self) -> &Board {
        &self.board
    }
}

impl Tracked {
    pub fn new(p: &Partition, budget: u32) -> Self {
        Tracked {
            board: Board::new(p, budget),
            starters: vec![None; p.k()],
        }
    }

    pub fn play(&self, mv: (usize, u32)) -> Tracked {
        let part = self.board.part_of[mv.0];
        let mut starters = self.starters.clone();
        if starters[part].is_none() {
            starters[part] = Some(self.board.turn());
        }
        Tracked {
            board: self.board.play(mv),
            starters,
        }
    }

    /// The count-level position this board represents.
    pub fn to_state(&self, p: &Partition) -> GameState {
        let parts = self.part_states_with_starters(p);
        let last = self.board.last.map(|(part, fresh)| LastMove { part, fresh });
        GameState::from_parts(p.clone(), self.board.budget, parts, last).expect("board maps to a valid state")
    }

    pub fn part_states_with_starters(&self, p: &Partition) -> Vec<PartState> {
        let b = &self.board;
        p.sizes()
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let verts: Vec<usize> = (0..b.colors.len()).filter(|&v| b.part_of[v] == i).collect();
                let colors: BTreeSet<u32> = verts.iter().map(|&v| b.colors[v]).filter(|&c| c != 0).collect();
                PartState {
                    size: r,
                    colored: verts.iter().filter(|&&v| b.colors[v] != 0).count() as u32,
                    distinct: colors.len() as u32,
                    starter: self.starters[i],
                }
            })
            .collect()
    }
}

/// Minimax over labeled boards; use one oracle per graph and budget.
#[derive(Default)]
pub struct Oracle {
    memo: HashMap<Vec<u32>, bool>,
}

impl Oracle {
    /// Whether Alice wins from `b` under optimal play.
    pub fn alice_wins(&mut self, b: &Board) -> bool {
        match b.status() {
            GameStatus::AliceWon => return true,
            GameStatus::BobWon => return false,
            GameStatus::Ongoing => {}
        }
        if let Some(&v) = self.memo.get(&b.colors) {
            return v;
        }
        let alice = b.turn() == Player::Alice;
        let mut result = !alice;
        for mv in b.moves() {
            if self.alice_wins(&b.play(mv)) == alice {
                result = alice;
                break;
            }
        }
        self.memo.insert(b.colors.clone(), result);
        result
    }
}

/// Every count-level position reachable from the empty board, each paired
/// with one vertex-level board that reaches it.
pub fn reachable(p: &Partition, budget: u32) -> Vec<(GameState, Tracked)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(GameState::new(p.clone(), budget), Tracked::new(p, budget))];
    while let Some((state, board)) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        if state.status() == GameStatus::Ongoing {
            let mut done = HashSet::new();
            for mv in board.moves() {
                let cm = board.as_count_move(mv);
                if done.insert(cm) {
                    stack.push((state.apply_move(cm).expect("mapped move is legal"), board.play(mv)));
                }
            }
        }
        out.push((state, board));
    }
    out
}

/// Replays `moves` and returns every intermediate position, starting with
/// the empty board.
pub fn positions(p: &Partition, budget: u32, moves: &[Move]) -> Vec<GameState> {
    let mut s = GameState::new(p.clone(), budget);
    let mut out = vec![s.clone()];
    for &m in moves {
        s = s.apply_move(m).expect("recorded move is legal");
        out.push(s.clone());
    }
    out
}

/// Partially colored parts with exactly one colored vertex, colored by Bob.
pub fn b_singletons(s: &GameState) -> usize {
    s.parts()
        .iter()
        .filter(|p| p.is_partial() && p.colored == 1 && p.starter == Some(Player::Bob))
        .count()
}

/// Compares the count engine with the vertex model on every reachable
/// position of `p` with `budget` colors: status, legal moves, successor
/// positions and minimax value. Returns the number of positions checked.
pub fn compare_with_oracle(p: &Partition, budget: u32) -> Result<usize, String> {
    use chroma_core::Solver;

    let mut oracle = Oracle::default();
    let mut solver = Solver::new();
    let states = reachable(p, budget);
    for (state, board) in &states {
        let at = || format!("K[{p}] t={budget} {:?}", board.board.colors);
        if board.to_state(p) != *state {
            return Err(format!("{}: board counts differ from engine state", at()));
        }
        if state.status() != board.status() {
            return Err(format!("{}: status {} vs {}", at(), state.status(), board.status()));
        }
        if state.status() == GameStatus::Ongoing {
            let engine: BTreeSet<Move> = state.legal_moves().map_err(|e| e.to_string())?.into_iter().collect();
            let vertex: BTreeSet<Move> = board.all_moves().into_iter().map(|m| board.as_count_move(m)).collect();
            if engine != vertex {
                return Err(format!("{}: legal moves {engine:?} vs {vertex:?}", at()));
            }
            for mv in board.all_moves() {
                let next = state.apply_move(board.as_count_move(mv)).map_err(|e| e.to_string())?;
                if next != board.play(mv).to_state(p) {
                    return Err(format!("{}: successor after {mv:?} differs", at()));
                }
            }
            for part in 0..p.k() {
                for cm in [Move::fresh(part), Move::reuse(part)] {
                    if engine.contains(&cm) != state.check_move(cm).is_ok() {
                        return Err(format!("{}: check_move disagrees on {cm}", at()));
                    }
                }
            }
        }
        if solver.evaluate(state) != oracle.alice_wins(&board.board) {
            return Err(format!("{}: minimax values differ", at()));
        }
    }
    Ok(states.len())
}

/// One seeded game between randomly chosen strategies on a random graph
/// with at most `max_n` vertices.
pub fn random_playout(seed: u64, max_n: u32) -> (chroma_core::harness::GameRecord, chroma_core::StrategyId, chroma_core::StrategyId) {
    use chroma_core::{harness::simulate, partitions_up_to, StrategyId};
    use rand::{seq::SliceRandom, Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let all = partitions_up_to(max_n);
    let p = all.choose(&mut rng).unwrap().clone();
    let t = rng.gen_range(1..=p.n());
    let mut alices = vec![StrategyId::Random(rng.gen())];
    alices.extend(StrategyId::ALICE_RULES.iter().copied().filter(|id| id.is_applicable(&p)));
    let bobs = [StrategyId::Random(rng.gen()), StrategyId::B1, StrategyId::B1P];
    let alice = *alices.choose(&mut rng).unwrap();
    let bob = *bobs.choose(&mut rng).unwrap();
    let record = simulate(&p, t, alice, bob).unwrap_or_else(|e| panic!("K[{p}] t={t} {alice} vs {bob}: {e}"));
    (record, alice, bob)
}

/// Checks the transcript-level invariants of one playout.
pub fn check_playout(
    record: &chroma_core::harness::GameRecord,
    alice: chroma_core::StrategyId,
    bob: chroma_core::StrategyId,
) -> Result<(), String> {
    use chroma_core::StrategyId;

    let ctx = || format!("K[{}] t={} {alice} vs {bob}", record.partition, record.budget);
    record.replay().map_err(|e| format!("{}: {e}", ctx()))?;
    if (record.outcome == GameStatus::AliceWon) != record.fixing_move.is_some() {
        return Err(format!("{}: outcome {} with fixing move {:?}", ctx(), record.outcome, record.fixing_move));
    }
    let states = positions(&record.partition, record.budget, &record.count_moves());
    for (i, m) in record.moves.iter().enumerate() {
        let before = &states[i];
        let after = &states[i + 1];
        if bob == StrategyId::B1 && m.mover == Player::Bob && b_singletons(after) > 1 {
            return Err(format!("{}: {} B-singletons after move {}", ctx(), b_singletons(after), i + 1));
        }
        let starts = before.part(m.part).is_uncolored();
        if alice == StrategyId::A3 && m.mover == Player::Alice && starts && record.partition.size(m.part).is_multiple_of(2) {
            return Err(format!("{}: A3 started even part {} at move {}", ctx(), m.part, i + 1));
        }
    }
    Ok(())
}

/// Relabels `board` by a random permutation of equal-size parts and of the
/// colors.
pub fn permute<R: rand::Rng>(p: &Partition, board: &Tracked, rng: &mut R) -> Tracked {
    use rand::seq::SliceRandom;

    let k = p.k();
    // sigma[new] = old, shuffled within runs of equal size.
    let mut sigma: Vec<usize> = (0..k).collect();
    let mut start = 0;
    while start < k {
        let end = (start..k).find(|&i| p.size(i) != p.size(start)).unwrap_or(k);
        sigma[start..end].shuffle(rng);
        start = end;
    }
    let mut palette: Vec<u32> = (1..=board.budget).collect();
    palette.shuffle(rng);
    let recolor = |c: u32| if c == 0 { 0 } else { palette[c as usize - 1] };

    let offsets: Vec<usize> = p
        .sizes()
        .iter()
        .scan(0usize, |acc, &r| {
            let o = *acc;
            *acc += r as usize;
            Some(o)
        })
        .collect();
    let mut out = board.clone();
    for new in 0..k {
        let old = sigma[new];
        for j in 0..p.size(new) as usize {
            out.board.colors[offsets[new] + j] = recolor(board.colors[offsets[old] + j]);
            out.board.by[offsets[new] + j] = board.by[offsets[old] + j];
        }
        out.starters[new] = board.starters[old];
    }
    out.board.last = board
        .last
        .map(|(part, fresh)| (sigma.iter().position(|&o| o == part).unwrap(), fresh));
    out
}

/// A board reached by `moves` uniformly random vertex moves.
pub fn random_board<R: rand::Rng>(p: &Partition, budget: u32, moves: usize, rng: &mut R) -> Tracked {
    use rand::seq::SliceRandom;

    let mut b = Tracked::new(p, budget);
    for _ in 0..moves {
        if b.status() != GameStatus::Ongoing {
            break;
        }
        let options = b.all_moves();
        b = b.play(*options.choose(rng).unwrap());
    }
    b
}

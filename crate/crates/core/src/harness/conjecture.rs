//! Optimality questions: is `B1'` always best for Bob, and how far the simple
//! Alice rules fall short on `K[4,3,…,3,1,1]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameStatus, Player};
use crate::harness::verify::{verify_with, Verdict};
use crate::partition::{canonical_order, partitions_up_to, Partition};
use crate::solver::{Mode, RestrictedSearch, Solver, WinVector};
use crate::strategy::StrategyId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct B1pReport {
    pub max_n: u32,
    pub mode: Mode,
    pub partitions_checked: usize,
    pub budgets_checked: usize,
    /// Budgets where optimal Bob wins but `B1'` does not.
    pub counterexamples: Vec<Verdict>,
}

impl B1pReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn b1p_on(p: &Partition, mode: Mode) -> Result<(usize, Vec<Verdict>)> {
    let wv = Solver::new().win_vector(p);
    let mut search = RestrictedSearch::new(p.clone(), Player::Bob, StrategyId::B1P, mode)?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in (1..=p.n()).filter(|&t| !wv.alice_wins(t)) {
        checked += 1;
        let v = verify_with(&mut search, t)?;
        if !v.pass {
            bad.push(v);
        }
    }
    Ok((checked, bad))
}

/// Checks that Bob playing `B1'` wins at every budget where optimal Bob wins,
/// on every partition with at most `max_n` vertices. Each counterexample is
/// replayed and must end in an Alice win.
pub fn check_b1p_conjecture(max_n: u32, mode: Mode) -> Result<B1pReport> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be at least 1".into()));
    }
    let work = partitions_up_to(max_n);
    let per: Vec<(usize, Vec<Verdict>)> = work.par_iter().map(|p| b1p_on(p, mode)).collect::<Result<_>>()?;
    let budgets_checked = per.iter().map(|(c, _)| c).sum();
    let mut counterexamples: Vec<Verdict> = per.into_iter().flat_map(|(_, v)| v).collect();
    counterexamples.sort_by(|a, b| canonical_order(&a.partition, &b.partition).then(a.budget.cmp(&b.budget)));
    for v in &counterexamples {
        let rec = v.counterexample.as_ref().expect("failed verdicts carry a transcript");
        let end = rec.replay()?;
        if end.status() != GameStatus::AliceWon {
            return Err(Error::InvalidState(format!(
                "counterexample on K[{}] with {} colors does not replay to an Alice win",
                v.partition, v.budget
            )));
        }
    }
    Ok(B1pReport {
        max_n,
        mode,
        partitions_checked: work.len(),
        budgets_checked,
        counterexamples,
    })
}

/// `K[4,3,…,3,1,1]` with `k` parts.
pub fn nonopt_partition(k: usize) -> Result<Partition> {
    if k < 6 {
        return Err(Error::InvalidArgument(format!("k must be at least 6, got {k}")));
    }
    let mut sizes = vec![4];
    sizes.extend(std::iter::repeat_n(3, k - 3));
    sizes.extend([1, 1]);
    Partition::new(sizes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonOptReport {
    pub k: usize,
    pub partition: Partition,
    /// `2k − 4`.
    pub budget: u32,
    pub win_vector: WinVector,
    pub chi_g: u32,
    pub composite: Verdict,
    /// The simple Alice rules; each is expected to fail at `budget`.
    pub simple: Vec<Verdict>,
}

impl NonOptReport {
    pub fn chi_g_within_budget(&self) -> bool {
        self.chi_g <= self.budget
    }

    pub fn pass(&self) -> bool {
        self.chi_g_within_budget() && self.composite.pass && self.simple.iter().all(|v| !v.pass)
    }
}

/// The simple Alice rules compared against the composite one.
pub const SIMPLE_ALICE_RULES: [StrategyId; 6] = [
    StrategyId::A1,
    StrategyId::A1P,
    StrategyId::A2,
    StrategyId::A2P,
    StrategyId::A3,
    StrategyId::A3P,
];

/// On `K[4,3,…,3,1,1]` with `k ≥ 6` parts, optimal play needs at most
/// `2k − 4` colors and the composite rule achieves it, while none of the
/// simple rules does.
///
/// Rules that do not apply to the graph (`A3`, `A3'` when `n` is even) are
/// reported as failing with no transcript.
pub fn check_nonoptimality_theorem(k: usize, mode: Mode) -> Result<NonOptReport> {
    let p = nonopt_partition(k)?;
    let budget = 2 * k as u32 - 4;
    let win_vector = Solver::new().win_vector(&p);
    let run = |id: StrategyId| -> Result<Verdict> {
        if !id.is_applicable(&p) {
            return Ok(Verdict {
                partition: p.clone(),
                budget,
                side: Player::Alice,
                strategy: id,
                mode,
                pass: false,
                counterexample: None,
            });
        }
        let mut search = RestrictedSearch::new(p.clone(), Player::Alice, id, mode)?;
        verify_with(&mut search, budget)
    };
    let composite = run(StrategyId::AComposite)?;
    let simple = SIMPLE_ALICE_RULES.par_iter().map(|&id| run(id)).collect::<Result<Vec<_>>>()?;
    Ok(NonOptReport {
        k,
        chi_g: win_vector.chi_g(),
        partition: p,
        budget,
        win_vector,
        composite,
        simple,
    })
}

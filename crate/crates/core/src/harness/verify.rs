//! Strategy guarantees checked against an exhaustive opponent.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::Result;
use crate::game::{GameStatus, Player};
use crate::harness::record::{Agent, GameRecord};
use crate::partition::Partition;
use crate::solver::{Mode, RestrictedSearch, WinVector};
use crate::strategy::StrategyId;

/// Result of one guarantee check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub partition: Partition,
    pub budget: u32,
    pub side: Player,
    pub strategy: StrategyId,
    pub mode: Mode,
    pub pass: bool,
    /// First failing line in search order, present iff `!pass`.
    pub counterexample: Option<GameRecord>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} as {} on K[{}] with {} colors: {}",
            self.strategy,
            self.side,
            self.partition,
            self.budget,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Checks a budget against an existing search, reusing its memo.
pub fn verify_with(search: &mut RestrictedSearch, budget: u32) -> Result<Verdict> {
    let partition = search.partition().clone();
    let counterexample = match search.failing_line(budget)? {
        None => None,
        Some(line) => {
            let (alice, bob) = match search.side() {
                Player::Alice => (Agent::Strategy(search.strategy()), Agent::Adversary),
                Player::Bob => (Agent::Adversary, Agent::Strategy(search.strategy())),
            };
            let record = GameRecord::from_moves(&partition, budget, alice, bob, &line)?;
            record.replay()?;
            Some(record)
        }
    };
    Ok(Verdict {
        partition,
        budget,
        side: search.side(),
        strategy: search.strategy(),
        mode: search.mode(),
        pass: counterexample.is_none(),
        counterexample,
    })
}

/// Does `id`, playing for `side`, win on `partition` with `budget` colors
/// whatever the opponent does?
pub fn verify_guarantee(
    partition: &Partition,
    budget: u32,
    side: Player,
    id: StrategyId,
    mode: Mode,
) -> Result<Verdict> {
    let mut search = RestrictedSearch::new(partition.clone(), side, id, mode)?;
    verify_with(&mut search, budget)
}

/// The strategy rules whose guarantees are checked mechanically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "a1")]
    A1,
    #[serde(rename = "a2")]
    A2,
    #[serde(rename = "a3")]
    A3,
    #[serde(rename = "b1-large")]
    B1Large,
    #[serde(rename = "b1-no-triple")]
    B1NoTriple,
    #[serde(rename = "b1-triple")]
    B1Triple,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::A1 => "a1",
            Rule::A2 => "a2",
            Rule::A3 => "a3",
            Rule::B1Large => "b1-large",
            Rule::B1NoTriple => "b1-no-triple",
            Rule::B1Triple => "b1-triple",
        })
    }
}

/// A rule guarantee instantiated on one partition.
///
/// Alice's rules promise a win with `budget` colors or more; Bob's promise
/// a win with `budget` colors or fewer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub rule: Rule,
    pub side: Player,
    pub strategy: StrategyId,
    pub budget: u32,
}

impl Claim {
    fn new(rule: Rule, strategy: StrategyId, budget: u32) -> Self {
        let side = strategy.owner().expect("rule strategies belong to one side");
        Claim {
            rule,
            side,
            strategy,
            budget,
        }
    }

    /// Every budget the claim covers on a graph with `n` vertices.
    pub fn budgets(&self, n: u32) -> RangeInclusive<u32> {
        match self.side {
            Player::Alice => self.budget.max(1)..=n,
            Player::Bob => 1..=self.budget.min(n),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.side {
            Player::Alice => "≥",
            Player::Bob => "≤",
        };
        write!(f, "rule {}: {} wins as {} with {dir} {} colors", self.rule, self.strategy, self.side, self.budget)
    }
}

/// Rule guarantees that apply to `p`. Only partitions without singletons
/// carry claims.
pub fn guarantee_claims(p: &Partition) -> Vec<Claim> {
    let k = p.k() as u32;
    if p.min_part() < 2 {
        return Vec::new();
    }
    let half = p.ceil_half_sum();
    let even = p.n().is_multiple_of(2);
    let triple = p.has_part_of_size(3);
    let mut out = vec![Claim::new(Rule::A1, StrategyId::A1, 2 * k - 1)];
    if k >= 3 && triple {
        out.push(Claim::new(Rule::A2, StrategyId::A2, 2 * k - 2));
    }
    if !even {
        out.push(Claim::new(Rule::A3, StrategyId::A3, half));
    }
    if p.min_part() >= 4 {
        out.push(Claim::new(Rule::B1Large, StrategyId::B1, 2 * k - 2));
    }
    if k >= 3 && !triple {
        let t = if even { 2 * k - 2 } else { (2 * k - 2).min(half - 1) };
        out.push(Claim::new(Rule::B1NoTriple, StrategyId::B1, t));
    }
    if k >= 3 && triple {
        let t = if even { 2 * k - 3 } else { (2 * k - 3).min(half - 1) };
        out.push(Claim::new(Rule::B1Triple, StrategyId::B1, t));
    }
    out.retain(|c| c.budget >= 1);
    out
}

/// Checks `claim` at every budget it covers; returns the failing verdicts.
pub fn check_claim(p: &Partition, claim: &Claim, mode: Mode) -> Result<Vec<Verdict>> {
    let mut search = RestrictedSearch::new(p.clone(), claim.side, claim.strategy, mode)?;
    let mut failures = Vec::new();
    for t in claim.budgets(p.n()) {
        let v = verify_with(&mut search, t)?;
        if !v.pass {
            failures.push(v);
        }
    }
    Ok(failures)
}

/// A guarantee that contradicts the solver's value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub partition: Partition,
    pub budget: u32,
    pub side: Player,
    pub strategy: StrategyId,
}

/// A strategy that guarantees Alice a win at `t` forces `alice_wins(t)`, and
/// one that guarantees Bob a win forces the opposite. Checks this for every
/// applicable rule at every budget.
pub fn consistency_triangle(wv: &WinVector, mode: Mode) -> Result<Vec<TriangleViolation>> {
    let p = wv.partition();
    let mut out = Vec::new();
    let rules = StrategyId::ALICE_RULES
        .iter()
        .map(|&id| (id, Player::Alice))
        .chain(StrategyId::BOB_RULES.iter().map(|&id| (id, Player::Bob)));
    for (id, side) in rules {
        if !id.is_applicable(p) {
            continue;
        }
        let mut search = RestrictedSearch::new(p.clone(), side, id, mode)?;
        for t in 1..=p.n() {
            let guaranteed = search.value(t)?;
            let optimal = if wv.alice_wins(t) {
                GameStatus::AliceWon
            } else {
                GameStatus::BobWon
            };
            let promised = match side {
                Player::Alice => GameStatus::AliceWon,
                Player::Bob => GameStatus::BobWon,
            };
            if guaranteed && optimal != promised {
                out.push(TriangleViolation {
                    partition: p.clone(),
                    budget: t,
                    side,
                    strategy: id,
                });
            }
        }
    }
    Ok(out)
}

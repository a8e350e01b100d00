//! Closed-form values and bounds for the game chromatic number.

use std::fmt;

use serde::Serialize;

use crate::partition::Partition;

/// Rows of the summary table, in table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Table1Row {
    /// `k = 1`.
    SinglePart,
    /// `k = 2`, `r_2 = 1`.
    TwoPartsSingleton,
    /// `k = 2`, `r_2 >= 2`.
    TwoParts,
    /// `k >= 3`, `r_k = 2`, some `r_j = 3`, `n` even.
    PairsEvenWithTriple,
    /// `k >= 3`, `r_k = 2`, no `r_j = 3`, `n` even.
    PairsEvenNoTriple,
    /// `k >= 3`, `r_k = 2`, some `r_j = 3`, `n` odd.
    PairsOddWithTriple,
    /// `k >= 3`, `r_k = 2`, no `r_j = 3`, `n` odd.
    PairsOddNoTriple,
    /// `k >= 3`, `r_k = 3`.
    MinThree,
    /// `k >= 3`, `r_k >= 4`.
    MinFourPlus,
}

impl Table1Row {
    pub const ALL: [Table1Row; 9] = [
        Table1Row::SinglePart,
        Table1Row::TwoPartsSingleton,
        Table1Row::TwoParts,
        Table1Row::PairsEvenWithTriple,
        Table1Row::PairsEvenNoTriple,
        Table1Row::PairsOddWithTriple,
        Table1Row::PairsOddNoTriple,
        Table1Row::MinThree,
        Table1Row::MinFourPlus,
    ];

    pub fn matches(&self, p: &Partition) -> bool {
        let (k, rk, even) = (p.k(), p.min_part(), p.n().is_multiple_of(2));
        let triple = p.has_part_of_size(3);
        match self {
            Table1Row::SinglePart => k == 1,
            Table1Row::TwoPartsSingleton => k == 2 && rk == 1,
            Table1Row::TwoParts => k == 2 && rk >= 2,
            Table1Row::PairsEvenWithTriple => k >= 3 && rk == 2 && triple && even,
            Table1Row::PairsEvenNoTriple => k >= 3 && rk == 2 && !triple && even,
            Table1Row::PairsOddWithTriple => k >= 3 && rk == 2 && triple && !even,
            Table1Row::PairsOddNoTriple => k >= 3 && rk == 2 && !triple && !even,
            Table1Row::MinThree => k >= 3 && rk == 3,
            Table1Row::MinFourPlus => k >= 3 && rk >= 4,
        }
    }

    pub fn value(&self, p: &Partition) -> u32 {
        let k = p.k() as u32;
        let half = p.ceil_half_sum();
        match self {
            Table1Row::SinglePart => 1,
            Table1Row::TwoPartsSingleton => 2,
            Table1Row::TwoParts => 3,
            Table1Row::PairsEvenWithTriple | Table1Row::MinThree => 2 * k - 2,
            Table1Row::PairsEvenNoTriple | Table1Row::MinFourPlus => 2 * k - 1,
            Table1Row::PairsOddWithTriple => (2 * k - 2).min(half),
            Table1Row::PairsOddNoTriple => (2 * k - 1).min(half),
        }
    }
}

pub const SINGLETON_REASON: &str = "singleton with k ≥ 3";

/// Table lookup result; "not applicable" is a value, not an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Table1 {
    Value { chi_g: u32, row: Table1Row },
    NotApplicable { reason: &'static str },
}

impl Table1 {
    pub fn value(&self) -> Option<u32> {
        match self {
            Table1::Value { chi_g, .. } => Some(*chi_g),
            Table1::NotApplicable { .. } => None,
        }
    }
}

impl fmt::Display for Table1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1::Value { chi_g, .. } => write!(f, "{chi_g}"),
            Table1::NotApplicable { reason } => write!(f, "not-applicable ({reason})"),
        }
    }
}

/// Every row whose side conditions hold; used to check the rows are disjoint.
pub fn table1_matching_rows(p: &Partition) -> Vec<Table1Row> {
    Table1Row::ALL.into_iter().filter(|r| r.matches(p)).collect()
}

/// Exact value from the summary table, first matching row wins.
pub fn table1_chi_g(p: &Partition) -> Table1 {
    match Table1Row::ALL.into_iter().find(|r| r.matches(p)) {
        Some(row) => Table1::Value {
            chi_g: row.value(p),
            row,
        },
        None => Table1::NotApplicable {
            reason: SINGLETON_REASON,
        },
    }
}

/// Where the uniform closed form below disagrees with the table and with
/// exhaustive search: three parts of size at least 4 need `2k − 1 = 5`
/// colors, and any number of parts of size exactly 3 need only `2k − 2`.
pub fn uniform_formula_contradicted(k: u32, r: u32) -> bool {
    (k == 3 && r >= 4) || (k >= 4 && r == 3)
}

/// Value for the uniform graph `K[r,...,r]` with `k` parts, as published.
pub fn uniform_chi_g(k: u32, r: u32) -> u32 {
    if k == 1 {
        1
    } else if k == 3 && r >= 3 {
        2 * k - 2
    } else {
        2 * k - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Table1,
    Uniform,
    /// Proper coloring needs `k` colors; the `k <= 2` singleton rows.
    Obvious,
    A1,
    A2,
    A3,
    B1Large,
    #[serde(rename = "b1_no_triple")]
    B1NoTriple,
    #[serde(rename = "b1_triple")]
    B1Triple,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::Table1 => "table1",
            BoundSource::Uniform => "uniform",
            BoundSource::Obvious => "obvious",
            BoundSource::A1 => "a1",
            BoundSource::A2 => "a2",
            BoundSource::A3 => "a3",
            BoundSource::B1Large => "b1_large",
            BoundSource::B1NoTriple => "b1_no_triple",
            BoundSource::B1Triple => "b1_triple",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// `None` when the bound does not apply.
    pub value: Option<u32>,
    pub kind: BoundKind,
    pub source: BoundSource,
    pub applicable: bool,
    pub reason: Option<String>,
}

impl BoundReport {
    fn holds(kind: BoundKind, source: BoundSource, value: u32) -> Self {
        BoundReport {
            value: Some(value),
            kind,
            source,
            applicable: true,
            reason: None,
        }
    }

    fn skipped(kind: BoundKind, source: BoundSource, reason: impl Into<String>) -> Self {
        BoundReport {
            value: None,
            kind,
            source,
            applicable: false,
            reason: Some(reason.into()),
        }
    }

    fn when(
        cond: bool,
        kind: BoundKind,
        source: BoundSource,
        value: impl FnOnce() -> u32,
        reason: &str,
    ) -> Self {
        if cond {
            Self::holds(kind, source, value())
        } else {
            Self::skipped(kind, source, reason)
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BoundKind::Exact => "exact",
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
        };
        match (self.value, &self.reason) {
            (Some(v), _) => write!(f, "{kind:<5} {v:>3}  {}", self.source),
            (None, Some(r)) => write!(f, "{kind:<5}   -  {} (n/a: {r})", self.source),
            (None, None) => write!(f, "{kind:<5}   -  {}", self.source),
        }
    }
}

/// Every known value and bound for `p`, with inapplicable ones explained.
pub fn bounds(p: &Partition) -> Vec<BoundReport> {
    use BoundKind::*;
    use BoundSource::*;

    let k = p.k() as u32;
    let rk = p.min_part();
    let half = p.ceil_half_sum();
    let even = p.n().is_multiple_of(2);
    let triple = p.has_part_of_size(3);
    let no_singletons = rk >= 2;

    let mut out = Vec::new();
    out.push(match table1_chi_g(p) {
        self::Table1::Value { chi_g, .. } => BoundReport::holds(Exact, Table1, chi_g),
        self::Table1::NotApplicable { reason } => BoundReport::skipped(Exact, Table1, reason),
    });
    let uniform_domain = p.is_uniform() && (k == 1 || rk >= 2) && !uniform_formula_contradicted(k, rk);
    out.push(BoundReport::when(
        uniform_domain,
        Exact,
        Uniform,
        || uniform_chi_g(k, rk),
        if !p.is_uniform() {
            "parts differ in size"
        } else if rk == 1 {
            "parts of size 1 with k ≥ 2"
        } else {
            "published uniform formula contradicts exhaustive search here"
        },
    ));
    out.push(BoundReport::holds(Lower, Obvious, k));
    let obvious_upper = k == 1 || (k == 2 && rk == 1);
    out.push(BoundReport::when(
        obvious_upper,
        Upper,
        Obvious,
        || k,
        "only for k = 1 or k = 2 with r_2 = 1",
    ));

    out.push(BoundReport::holds(Upper, A1, 2 * k - 1));
    out.push(BoundReport::when(
        k >= 3 && triple,
        Upper,
        A2,
        || 2 * k - 2,
        "needs k ≥ 3 and a part of size 3",
    ));
    out.push(BoundReport::when(!even, Upper, A3, || half, "needs odd n"));

    out.push(BoundReport::when(
        rk >= 4 || (k == 2 && rk >= 2),
        Lower,
        B1Large,
        || 2 * k - 1,
        "needs r_k ≥ 4 (or k = 2 with r_2 ≥ 2)",
    ));
    out.push(BoundReport::when(
        k >= 3 && no_singletons && !triple,
        Lower,
        B1NoTriple,
        || if even { 2 * k - 1 } else { (2 * k - 1).min(half) },
        "needs k ≥ 3, all parts ≥ 2 and none of size 3",
    ));
    out.push(BoundReport::when(
        k >= 3 && no_singletons && triple,
        Lower,
        B1Triple,
        || if even { 2 * k - 2 } else { (2 * k - 2).min(half) },
        "needs k ≥ 3, all parts ≥ 2 and a part of size 3",
    ));
    out
}

/// Largest applicable lower bound and smallest applicable upper bound.
pub fn bound_interval(p: &Partition) -> (u32, u32) {
    let reports = bounds(p);
    let pick = |kind: BoundKind| reports.iter().filter(move |b| b.kind == kind).filter_map(|b| b.value);
    let lower = pick(BoundKind::Lower).max().unwrap_or(1);
    let upper = pick(BoundKind::Upper).min().unwrap_or(p.n());
    (lower, upper)
}

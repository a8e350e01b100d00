//! Exhaustive sweeps over all small partitions.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{table1_chi_g, Table1};
use crate::harness::verify::{consistency_triangle, TriangleViolation};
use crate::partition::{canonical_order, partitions_up_to, Partition};
use crate::solver::{Mode, Solver, WinVector};

pub const CSV_HEADER: [&str; 9] = ["partition", "n", "k", "chi_g", "table1", "agrees", "monotone", "winvector", "ms"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFilter {
    #[default]
    All,
    NoSingletons,
    WithSingletons,
}

impl ScanFilter {
    pub fn admits(&self, p: &Partition) -> bool {
        match self {
            ScanFilter::All => true,
            ScanFilter::NoSingletons => p.min_part() >= 2,
            ScanFilter::WithSingletons => p.min_part() == 1,
        }
    }
}

impl fmt::Display for ScanFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanFilter::All => "all",
            ScanFilter::NoSingletons => "no-singletons",
            ScanFilter::WithSingletons => "with-singletons",
        })
    }
}

impl FromStr for ScanFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ScanFilter::All),
            "no-singletons" => Ok(ScanFilter::NoSingletons),
            "with-singletons" => Ok(ScanFilter::WithSingletons),
            other => Err(Error::InvalidArgument(format!(
                "unknown filter `{other}` (expected all, no-singletons or with-singletons)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub max_n: u32,
    pub filter: ScanFilter,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    /// Record wall time per row. Off gives byte-identical output across runs.
    pub timing: bool,
    /// Also check every rule guarantee against the solver on each row.
    pub triangle: bool,
}

impl ScanConfig {
    pub fn new(max_n: u32) -> Self {
        ScanConfig {
            max_n,
            filter: ScanFilter::All,
            jobs: 0,
            timing: false,
            triangle: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub partition: Partition,
    pub n: u32,
    pub k: usize,
    pub chi_g: u32,
    pub win_vector: WinVector,
    pub table1: Table1,
    /// The summary table applies and matches the solver.
    pub agrees: bool,
    pub monotone: bool,
    pub ms: u64,
    pub triangle_violations: Vec<TriangleViolation>,
}

impl ScanRow {
    pub fn compute(partition: &Partition, timing: bool, triangle: bool) -> Result<Self> {
        let start = Instant::now();
        let wv = Solver::new().win_vector(partition);
        let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
        let table1 = table1_chi_g(partition);
        let chi = wv.chi_g();
        let triangle_violations = if triangle {
            consistency_triangle(&wv, Mode::Deterministic)?
        } else {
            Vec::new()
        };
        Ok(ScanRow {
            partition: partition.clone(),
            n: partition.n(),
            k: partition.k(),
            chi_g: chi,
            agrees: table1.value() == Some(chi),
            monotone: wv.is_monotone(),
            win_vector: wv,
            table1,
            ms,
            triangle_violations,
        })
    }

    /// The summary table applies but gives a different value.
    pub fn disagrees(&self) -> bool {
        self.table1.value().is_some() && !self.agrees
    }

    pub fn csv_record(&self) -> [String; 9] {
        [
            self.partition.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.chi_g.to_string(),
            match self.table1.value() {
                Some(v) => v.to_string(),
                None => "n/a".to_string(),
            },
            self.agrees.to_string(),
            self.monotone.to_string(),
            self.win_vector.bitstring(),
            self.ms.to_string(),
        ]
    }
}

/// Solves every admitted partition with up to `max_n` vertices. `on_row` sees
/// rows as they finish (in any order); the returned list is canonically
/// sorted and independent of the worker count.
pub fn scan_with(config: &ScanConfig, on_row: &(dyn Fn(&ScanRow) + Sync)) -> Result<Vec<ScanRow>> {
    use rayon::prelude::*;

    if config.max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be at least 1".into()));
    }
    let work: Vec<Partition> = partitions_up_to(config.max_n)
        .into_iter()
        .filter(|p| config.filter.admits(p))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut rows = pool.install(|| {
        work.par_iter()
            .map(|p| {
                let row = ScanRow::compute(p, config.timing, config.triangle)?;
                on_row(&row);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by(|a, b| canonical_order(&a.partition, &b.partition));
    Ok(rows)
}

pub fn scan(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    scan_with(config, &|_| {})
}

pub fn write_csv<W: io::Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::InvalidArgument(format!("writing csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for row in rows {
        w.write_record(row.csv_record()).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("writing csv: {e}")))?;
    Ok(())
}

//! Multipartite shapes `K[r_1,...,r_k]` and their enumeration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest vertex count accepted. Search keys pack counts into bytes.
pub const MAX_VERTICES: u32 = 255;

/// Part sizes of a complete multipartite graph, sorted non-increasing.
///
/// Vertices carry no identity; a part is its index and its cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    sizes: Arc<[u32]>,
}

impl Partition {
    /// Builds a partition from sizes in any order.
    pub fn new(sizes: impl Into<Vec<u32>>) -> Result<Self> {
        let mut sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("no parts given".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidPartition("part sizes must be positive".into()));
        }
        let n: u64 = sizes.iter().map(|&r| u64::from(r)).sum();
        if n > u64::from(MAX_VERTICES) {
            return Err(Error::InvalidPartition(format!(
                "{n} vertices exceeds the limit of {MAX_VERTICES}"
            )));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition {
            sizes: sizes.into(),
        })
    }

    /// `K[r,...,r]` with `k` parts.
    pub fn uniform(k: usize, r: u32) -> Result<Self> {
        Self::new(vec![r; k])
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn size(&self, part: usize) -> u32 {
        self.sizes[part]
    }

    /// Number of parts.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Number of vertices.
    pub fn n(&self) -> u32 {
        self.sizes.iter().sum()
    }

    /// Smallest part size `r_k`.
    pub fn min_part(&self) -> u32 {
        *self.sizes.last().expect("partition is nonempty")
    }

    /// `l_j`, the number of parts of size exactly `j`.
    pub fn count_of_size(&self, j: u32) -> usize {
        self.sizes.iter().filter(|&&r| r == j).count()
    }

    pub fn has_part_of_size(&self, j: u32) -> bool {
        self.sizes.contains(&j)
    }

    /// `sum_i ceil(r_i / 2)`.
    pub fn ceil_half_sum(&self) -> u32 {
        self.sizes.iter().map(|r| r.div_ceil(2)).sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.sizes.iter().all(|&r| r == self.sizes[0])
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.sizes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sizes = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(Error::InvalidPartition(format!("empty entry in `{s}`")));
            }
            let value: i64 = token
                .parse()
                .map_err(|_| Error::InvalidPartition(format!("`{token}` is not an integer")))?;
            if value <= 0 {
                return Err(Error::InvalidPartition(format!(
                    "part sizes must be positive, got {value}"
                )));
            }
            let value = u32::try_from(value)
                .map_err(|_| Error::InvalidPartition(format!("`{token}` is too large")))?;
            sizes.push(value);
        }
        Partition::new(sizes)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.sizes.iter())
    }
}

/// All partitions of `n`, largest first part first: `[n]`, `[n-1,1]`, ..., `[1,...,1]`.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                sizes: prefix.clone().into(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All partitions of every `n` in `1..=max_n`, ordered by `n` then as in [`partitions_of`].
pub fn partitions_up_to(max_n: u32) -> Vec<Partition> {
    (1..=max_n).flat_map(partitions_of).collect()
}

/// Canonical row order: by vertex count, then reverse-lexicographic on sizes.
pub fn canonical_order(a: &Partition, b: &Partition) -> std::cmp::Ordering {
    a.n().cmp(&b.n()).then_with(|| b.sizes().cmp(a.sizes()))
}

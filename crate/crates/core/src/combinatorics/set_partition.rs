//! The set-partition lattice Π_m.

use std::fmt;

use crate::error::{Error, Result};

use super::UnionFind;

/// A partition of `{1, …, m}` stored as its restricted-growth string:
/// `labels[i]` is the block of element `i + 1`, blocks numbered in order of
/// first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<usize>,
}

impl SetPartition {
    /// Builds from any labelling; labels are renumbered canonically.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    /// Builds from blocks of 1-based elements covering `{1, …, m}` exactly once.
    pub fn from_blocks(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; m];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Malformed("empty block".into()));
            }
            for &x in block {
                if x == 0 || x > m || raw[x - 1] != usize::MAX {
                    return Err(Error::Malformed(format!("element {x} invalid or repeated")));
                }
                raw[x - 1] = b;
            }
        }
        if raw.contains(&usize::MAX) {
            return Err(Error::Malformed("blocks do not cover the ground set".into()));
        }
        Ok(Self::from_labels(&raw))
    }

    /// The partition into singletons, `0̂_m`.
    pub fn discrete(m: usize) -> Self {
        Self {
            labels: (0..m).collect(),
        }
    }

    /// The one-block partition, `1̂_m`.
    pub fn full(m: usize) -> Self {
        Self { labels: vec![0; m] }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |&l| l + 1)
    }

    /// Blocks as sorted lists of 1-based elements, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l].push(i + 1);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// `μ(0̂_m, ρ) = (-1)^{m - |ρ|} Π (|ρ_i| - 1)!`. Exact for `m ≤ 33`.
    pub fn mobius_lower(&self) -> i128 {
        mobius_from_sizes(&self.block_sizes(), self.ground_size())
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.ground_size() != other.ground_size() {
            return false;
        }
        let mut image = vec![usize::MAX; self.num_blocks()];
        self.labels.iter().zip(&other.labels).all(|(&a, &b)| {
            if image[a] == usize::MAX {
                image[a] = b;
            }
            image[a] == b
        })
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        let m = self.ground_size();
        if other.ground_size() != m {
            return Err(Error::SizeMismatch {
                expected: m,
                actual: other.ground_size(),
            });
        }
        let mut uf = UnionFind::new(m);
        for labels in [&self.labels, &other.labels] {
            let mut first = vec![usize::MAX; m];
            for (i, &l) in labels.iter().enumerate() {
                if first[l] == usize::MAX {
                    first[l] = i;
                } else {
                    uf.union(first[l], i);
                }
            }
        }
        Ok(SetPartition { labels: uf.labels() })
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

pub(crate) fn mobius_from_sizes(sizes: &[usize], m: usize) -> i128 {
    let mut value: i128 = 1;
    for &s in sizes {
        for f in 2..s {
            value *= f as i128;
        }
    }
    if (m - sizes.len()) % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Every partition of `{1, …, m}` in lexicographic order of restricted-growth
/// strings. `m = 0` yields the empty partition once.
pub fn set_partitions(m: usize) -> SetPartitions {
    SetPartitions {
        current: Some(vec![0; m]),
    }
}

/// Iterator returned by [`set_partitions`].
#[derive(Clone, Debug)]
pub struct SetPartitions {
    current: Option<Vec<usize>>,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        let cur = self.current.take()?;
        let out = SetPartition { labels: cur.clone() };
        self.current = successor(cur);
        Some(out)
    }
}

fn successor(mut labels: Vec<usize>) -> Option<Vec<usize>> {
    let mut prefix_max = Vec::new();
    advance(&mut labels, &mut prefix_max).then_some(labels)
}

/// Steps a growth string to its lexicographic successor in place; false when
/// it was the last one.
fn advance(labels: &mut [usize], prefix_max: &mut Vec<usize>) -> bool {
    let m = labels.len();
    if m <= 1 {
        return false;
    }
    prefix_max.clear();
    prefix_max.push(0);
    for i in 1..m {
        let prev = prefix_max[i - 1].max(labels[i - 1]);
        prefix_max.push(prev);
    }
    for i in (1..m).rev() {
        if labels[i] <= prefix_max[i] {
            labels[i] += 1;
            for l in labels.iter_mut().skip(i + 1) {
                *l = 0;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every restricted-growth string of length `m`, in the same
/// order as [`set_partitions`], without allocating per partition.
pub fn for_each_growth_string(m: usize, mut f: impl FnMut(&[usize])) {
    let mut labels = vec![0; m];
    let mut scratch = Vec::with_capacity(m);
    loop {
        f(&labels);
        if !advance(&mut labels, &mut scratch) {
            break;
        }
    }
}

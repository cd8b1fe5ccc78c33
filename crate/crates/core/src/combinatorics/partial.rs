//! Partial permutations and their cycle-path types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A size-`k` injection `positions[t] -> values[t]`.
///
/// Stored canonically with positions strictly increasing; reordering both
/// tuples simultaneously describes the same object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialPermutation {
    positions: Vec<u32>,
    values: Vec<u32>,
}

impl PartialPermutation {
    pub fn new(positions: Vec<u32>, values: Vec<u32>) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::SizeMismatch {
                expected: positions.len(),
                actual: values.len(),
            });
        }
        if positions.iter().chain(&values).any(|&x| x == 0) {
            return Err(Error::Malformed("entries must be positive integers".into()));
        }
        let mut pairs: Vec<(u32, u32)> = positions.into_iter().zip(values).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Malformed("repeated position".into()));
        }
        let mut seen = BTreeSet::new();
        if !pairs.iter().all(|&(_, v)| seen.insert(v)) {
            return Err(Error::Malformed("repeated value".into()));
        }
        let (positions, values) = pairs.into_iter().unzip();
        Ok(Self { positions, values })
    }

    pub fn empty() -> Self {
        Self {
            positions: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.positions.iter().copied().zip(self.values.iter().copied())
    }

    /// Number of edges `k`.
    pub fn size(&self) -> usize {
        self.positions.len()
    }

    /// Sorted `I ∪ J`.
    pub fn support(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.positions.iter().chain(&self.values).copied().collect();
        set.into_iter().collect()
    }

    pub fn support_size(&self) -> usize {
        self.support().len()
    }

    /// True when the support is exactly `{1, …, m}`.
    pub fn is_packed(&self) -> bool {
        self.support()
            .iter()
            .enumerate()
            .all(|(idx, &s)| s as usize == idx + 1)
    }

    /// Splits into a packed partial permutation and the support it is
    /// relabelled onto.
    pub fn canonicalize(&self) -> (PartialPermutation, Vec<u32>) {
        let support = self.support();
        let rank: BTreeMap<u32, u32> = support
            .iter()
            .enumerate()
            .map(|(idx, &s)| (s, idx as u32 + 1))
            .collect();
        let packed = PartialPermutation {
            positions: self.positions.iter().map(|p| rank[p]).collect(),
            values: self.values.iter().map(|v| rank[v]).collect(),
        };
        (packed, support)
    }

    /// Order-preserving substitution `u ↦ support[u-1]` applied to a packed
    /// partial permutation.
    pub fn relabel(support: &[u32], packed: &PartialPermutation) -> Result<PartialPermutation> {
        let m = packed.support_size();
        if support.len() != m {
            return Err(Error::SizeMismatch {
                expected: m,
                actual: support.len(),
            });
        }
        if !packed.is_packed() {
            return Err(Error::Malformed("relabel expects a packed partial permutation".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) || support.first() == Some(&0) {
            return Err(Error::Malformed("support must be strictly increasing and positive".into()));
        }
        let map = |u: &u32| support[*u as usize - 1];
        PartialPermutation::new(
            packed.positions.iter().map(map).collect(),
            packed.values.iter().map(map).collect(),
        )
    }

    /// Cycle and path lengths of the functional digraph `i_t -> j_t`.
    pub fn cycle_path_type(&self) -> CyclePathType {
        let (packed, _) = self.canonicalize();
        let m = packed.support_size();
        let mut out = vec![None; m];
        let mut inn = vec![None; m];
        for (i, j) in packed.edges() {
            out[i as usize - 1] = Some(j as usize - 1);
            inn[j as usize - 1] = Some(i as usize - 1);
        }
        functional_graph_type(&out, &inn)
    }

    /// Weakly connected component index of each packed vertex `1..=m`
    /// (returned 0-based by vertex).
    pub(crate) fn packed_components(&self) -> Vec<usize> {
        let m = self.support_size();
        let mut uf = super::UnionFind::new(m);
        for (i, j) in self.edges() {
            uf.union(i as usize - 1, j as usize - 1);
        }
        uf.labels()
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})({})", join(&self.positions), join(&self.values))
    }
}

pub(crate) fn join(xs: &[u32]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Cycle-path type of a graph in which every vertex has at most one out-edge
/// and at most one in-edge. Isolated vertices are ignored.
pub(crate) fn functional_graph_type(out: &[Option<usize>], inn: &[Option<usize>]) -> CyclePathType {
    let n = out.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    for start in 0..n {
        if inn[start].is_some() || out[start].is_none() {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        seen[v] = true;
        while let Some(w) = out[v] {
            seen[w] = true;
            len += 1;
            v = w;
        }
        paths.push(len);
    }
    for start in 0..n {
        if seen[start] || out[start].is_none() {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = out[v].expect("vertex on a cycle has an out-edge");
        }
        cycles.push(len);
    }
    CyclePathType::from_parts(cycles, paths)
}

/// The pair `(μ, ν)` of cycle lengths and path edge-lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclePathType {
    cycles: Vec<u32>,
    paths: Vec<u32>,
}

impl CyclePathType {
    pub fn new(cycles: Vec<u32>, paths: Vec<u32>) -> Result<Self> {
        if cycles.iter().chain(&paths).any(|&x| x == 0) {
            return Err(Error::Malformed("cycle and path lengths must be positive".into()));
        }
        Ok(Self::from_parts(cycles, paths))
    }

    fn from_parts(mut cycles: Vec<u32>, mut paths: Vec<u32>) -> Self {
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        paths.sort_unstable_by(|a, b| b.cmp(a));
        Self { cycles, paths }
    }

    pub fn cycles(&self) -> &[u32] {
        &self.cycles
    }

    pub fn paths(&self) -> &[u32] {
        &self.paths
    }

    /// Number of edges, `|μ| + |ν|`.
    pub fn size(&self) -> usize {
        (self.cycles.iter().sum::<u32>() + self.paths.iter().sum::<u32>()) as usize
    }

    /// Number of vertices, `|μ| + |ν| + len(ν)`.
    pub fn support_size(&self) -> usize {
        self.size() + self.paths.len()
    }

    pub fn cycle_multiplicity(&self, len: u32) -> usize {
        self.cycles.iter().filter(|&&c| c == len).count()
    }

    pub fn path_multiplicity(&self, len: u32) -> usize {
        self.paths.iter().filter(|&&c| c == len).count()
    }

    /// Packed representative: cycles first, then paths, each in decreasing
    /// length, laid out over consecutive integers.
    pub fn representative(&self) -> PartialPermutation {
        let mut positions = Vec::with_capacity(self.size());
        let mut values = Vec::with_capacity(self.size());
        let mut next = 1u32;
        for &c in &self.cycles {
            for t in 0..c {
                positions.push(next + t);
                values.push(next + (t + 1) % c);
            }
            next += c;
        }
        for &p in &self.paths {
            for t in 0..p {
                positions.push(next + t);
                values.push(next + t + 1);
            }
            next += p + 1;
        }
        PartialPermutation::new(positions, values).expect("representative is well formed")
    }

    /// Canonical key such as `mu=[2,1];nu=[2]`.
    pub fn key(&self) -> String {
        format!("mu=[{}];nu=[{}]", join(&self.cycles), join(&self.paths))
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad cycle-path key `{s}`"));
        let (mu, nu) = s.split_once(';').ok_or_else(bad)?;
        let list = |part: &str, prefix: &str| -> Result<Vec<u32>> {
            let inner = part
                .trim()
                .strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('['))
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            if inner.trim().is_empty() {
                return Ok(Vec::new());
            }
            inner
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        Self::new(list(mu, "mu=")?, list(nu, "nu=")?)
    }

    /// Every cycle-path type with exactly `k` edges.
    pub fn all_of_size(k: usize) -> Vec<CyclePathType> {
        let mut out = Vec::new();
        for c in 0..=k {
            for mu in integer_partitions(c as u32) {
                for nu in integer_partitions((k - c) as u32) {
                    out.push(Self::from_parts(mu.clone(), nu));
                }
            }
        }
        out
    }
}

impl fmt::Display for CyclePathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// All partitions of `n` as weakly decreasing part lists, in reverse
/// lexicographic order. `n = 0` yields the empty partition.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `m_i(λ)` for `i = 1..=max_part`, as a vector indexed from 1 (slot 0 unused).
pub fn part_multiplicities(lambda: &[u32]) -> Vec<u32> {
    let max = lambda.iter().copied().max().unwrap_or(0) as usize;
    let mut m = vec![0; max + 1];
    for &part in lambda {
        m[part as usize] += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(i: &[u32], j: &[u32]) -> PartialPermutation {
        PartialPermutation::new(i.to_vec(), j.to_vec()).unwrap()
    }

    fn figure_one() -> PartialPermutation {
        pp(&[2, 3, 5, 7, 9, 10, 11, 13, 15], &[7, 9, 5, 14, 3, 6, 10, 1, 15])
    }

    #[test]
    fn canonicalize_examples() {
        let (packed, support) = pp(&[3, 7], &[7, 9]).canonicalize();
        assert_eq!(packed, pp(&[1, 2], &[2, 3]));
        assert_eq!(support, vec![3, 7, 9]);

        let (packed, support) = pp(&[5], &[5]).canonicalize();
        assert_eq!(packed, pp(&[1], &[1]));
        assert_eq!(support, vec![5]);
    }

    #[test]
    fn canonicalize_figure_one() {
        let raw = figure_one();
        let (packed, support) = raw.canonicalize();
        assert_eq!(support, vec![1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15]);
        assert!(packed.is_packed());
        assert_eq!(packed.positions(), &[2, 3, 4, 6, 7, 8, 9, 10, 12]);
        assert_eq!(packed.values(), &[6, 7, 4, 11, 3, 5, 8, 1, 12]);
        assert_eq!(PartialPermutation::relabel(&support, &packed).unwrap(), raw);
        assert_eq!(packed.cycle_path_type(), raw.cycle_path_type());
    }

    #[test]
    fn relabel_examples() {
        assert_eq!(
            PartialPermutation::relabel(&[4, 8], &pp(&[1], &[2])).unwrap(),
            pp(&[4], &[8])
        );
        let p = pp(&[1, 2], &[2, 3]);
        assert_eq!(PartialPermutation::relabel(&[1, 2, 3], &p).unwrap(), p);
        assert_eq!(
            PartialPermutation::relabel(&[2, 5, 9], &p).unwrap(),
            pp(&[2, 5], &[5, 9])
        );
        assert!(matches!(
            PartialPermutation::relabel(&[2, 5], &p),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn malformed_input_rejected() {
        assert!(PartialPermutation::new(vec![1, 1], vec![2, 3]).is_err());
        assert!(PartialPermutation::new(vec![1, 2], vec![3, 3]).is_err());
        assert!(PartialPermutation::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn cycle_path_type_examples() {
        let t = figure_one().cycle_path_type();
        assert_eq!(t.cycles(), &[2, 1, 1]);
        assert_eq!(t.paths(), &[2, 2, 1]);
        assert_eq!(t.support_size(), figure_one().support_size());

        assert_eq!(pp(&[1], &[1]).cycle_path_type(), CyclePathType::new(vec![1], vec![]).unwrap());
        assert_eq!(
            pp(&[1, 2], &[2, 1]).cycle_path_type(),
            CyclePathType::new(vec![2], vec![]).unwrap()
        );
    }

    #[test]
    fn representative_round_trips() {
        for k in 0..=5 {
            for t in CyclePathType::all_of_size(k) {
                let rep = t.representative();
                assert!(rep.is_packed());
                assert_eq!(rep.cycle_path_type(), t);
                assert_eq!(rep.support_size(), t.support_size());
                assert_eq!(CyclePathType::parse_key(&t.key()).unwrap(), t);
            }
        }
    }

    #[test]
    fn type_counts() {
        let counts: Vec<usize> = (0..=4).map(|k| CyclePathType::all_of_size(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20]);
        assert_eq!(integer_partitions(5).len(), 7);
        assert_eq!(integer_partitions(0), vec![Vec::<u32>::new()]);
    }
}

//! Contraction of a packed partial permutation along a set partition.
//!
//! Identifying the vertices of a block forces further identifications:
//! merged vertices that both have out-edges must have merged targets, and
//! merged vertices that both have in-edges must have merged sources. The
//! resulting closure is again the graph of a partial permutation.

use std::collections::HashSet;

use crate::error::{Error, Result};

use super::partial::functional_graph_type;
use super::{CyclePathType, PartialPermutation, SetPartition, UnionFind};

/// Outcome of contracting along a set partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// Some closure block holds two distinct vertices of one connected
    /// component, so no map that is injective on components survives.
    Zero,
    /// Cycle-path type of the quotient graph.
    Type(CyclePathType),
}

/// Precomputed adjacency for repeated contractions of one packed partial
/// permutation.
#[derive(Clone, Debug)]
pub struct Contractor {
    out: Vec<Option<usize>>,
    inn: Vec<Option<usize>>,
    component: Vec<usize>,
}

/// Result of one closure computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub closure: SetPartition,
    pub kind: CyclePathType,
    /// Two vertices of the same component ended up in one block.
    pub collides: bool,
}

impl Contractor {
    pub fn new(p: &PartialPermutation) -> Result<Self> {
        if !p.is_packed() {
            return Err(Error::Malformed("contraction expects a packed partial permutation".into()));
        }
        let m = p.support_size();
        let mut out = vec![None; m];
        let mut inn = vec![None; m];
        for (i, j) in p.edges() {
            out[i as usize - 1] = Some(j as usize - 1);
            inn[j as usize - 1] = Some(i as usize - 1);
        }
        Ok(Self {
            out,
            inn,
            component: p.packed_components(),
        })
    }

    pub fn support_size(&self) -> usize {
        self.out.len()
    }

    /// Closes the growth string `labels` under edge propagation and returns
    /// the quotient. `labels` must have length `m`.
    pub fn quotient_of_labels(&self, labels: &[usize]) -> Quotient {
        let m = self.support_size();
        debug_assert_eq!(labels.len(), m);
        let mut uf = UnionFind::new(m);
        // Per root: one representative out-target and in-source of the class.
        let mut class_out = self.out.clone();
        let mut class_in = self.inn.clone();
        let mut pending = Vec::new();
        let mut first = vec![usize::MAX; m];
        for (v, &l) in labels.iter().enumerate() {
            if first[l] == usize::MAX {
                first[l] = v;
            } else {
                pending.push((first[l], v));
            }
        }
        while let Some((a, b)) = pending.pop() {
            let Some((root, gone)) = uf.union(a, b) else {
                continue;
            };
            for class in [&mut class_out, &mut class_in] {
                match (class[root], class[gone]) {
                    (Some(x), Some(y)) => pending.push((x, y)),
                    (None, Some(y)) => class[root] = Some(y),
                    _ => {}
                }
            }
        }

        let closure_labels = uf.labels();
        let blocks = closure_labels.iter().max().map_or(0, |&l| l + 1);
        let mut q_out = vec![None; blocks];
        let mut q_in = vec![None; blocks];
        for (v, target) in self.out.iter().enumerate() {
            if let Some(w) = *target {
                let (a, b) = (closure_labels[v], closure_labels[w]);
                q_out[a] = Some(b);
                q_in[b] = Some(a);
            }
        }
        let mut seen = HashSet::with_capacity(m);
        let collides = !closure_labels
            .iter()
            .zip(&self.component)
            .all(|(&block, &comp)| seen.insert((block, comp)));
        Quotient {
            closure: SetPartition::from_labels(&closure_labels),
            kind: functional_graph_type(&q_out, &q_in),
            collides,
        }
    }

    pub fn quotient(&self, rho: &SetPartition) -> Result<Quotient> {
        if rho.ground_size() != self.support_size() {
            return Err(Error::SizeMismatch {
                expected: self.support_size(),
                actual: rho.ground_size(),
            });
        }
        Ok(self.quotient_of_labels(rho.labels()))
    }
}

/// Contracts `p` along `rho`; [`Contraction::Zero`] when the closure merges two
/// vertices of one component.
pub fn contract(p: &PartialPermutation, rho: &SetPartition) -> Result<Contraction> {
    let q = Contractor::new(p)?.quotient(rho)?;
    Ok(if q.collides {
        Contraction::Zero
    } else {
        Contraction::Type(q.kind)
    })
}

/// Cycle-path type of the quotient graph, regardless of collisions.
pub fn quotient_type(p: &PartialPermutation, rho: &SetPartition) -> Result<CyclePathType> {
    Ok(Contractor::new(p)?.quotient(rho)?.kind)
}

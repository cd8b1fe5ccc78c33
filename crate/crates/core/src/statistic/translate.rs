//! Constrained translates and regular statistics.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{join_u32, CyclePathType, PartialPermutation};
use crate::error::{Error, Result};
use crate::poly::{for_each_constrained_subset, rat, Naming, Poly};

/// The weighted sum `Σ_L f(ℓ_1, …, ℓ_m) · 1_{L(U) L(V)}` over `m`-subsets
/// `L = {ℓ_1 < … < ℓ_m}` with `ℓ_{c+1} = ℓ_c + 1` for `c ∈ C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstrainedTranslate {
    key: TranslateKey,
    weight: Poly,
}

/// The `(packed, C)` part of a translate; weights of equal keys add up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranslateKey {
    pub packed: PartialPermutation,
    pub constraints: Vec<u32>,
}

impl TranslateKey {
    pub fn new(packed: PartialPermutation, mut constraints: Vec<u32>) -> Result<Self> {
        if !packed.is_packed() {
            return Err(Error::Malformed(format!(
                "{packed} is not packed: its support must be 1..m"
            )));
        }
        let m = packed.support_size() as u32;
        constraints.sort_unstable();
        constraints.dedup();
        if let Some(&c) = constraints.iter().find(|&&c| c == 0 || c >= m) {
            return Err(Error::Malformed(format!(
                "constraint {c} outside 1..{}",
                m.saturating_sub(1)
            )));
        }
        Ok(Self { packed, constraints })
    }

    pub fn support_size(&self) -> usize {
        self.packed.support_size()
    }
}

impl ConstrainedTranslate {
    pub fn new(packed: PartialPermutation, constraints: Vec<u32>, weight: Poly) -> Result<Self> {
        Self::from_key(TranslateKey::new(packed, constraints)?, weight)
    }

    pub fn from_key(key: TranslateKey, weight: Poly) -> Result<Self> {
        if weight.is_zero() {
            return Err(Error::Malformed("translate weight must be nonzero".into()));
        }
        if weight.num_vars() > key.support_size() {
            return Err(Error::Malformed(format!(
                "weight uses x{} but the support has size {}",
                weight.num_vars(),
                key.support_size()
            )));
        }
        Ok(Self { key, weight })
    }

    pub fn key(&self) -> &TranslateKey {
        &self.key
    }

    pub fn packed(&self) -> &PartialPermutation {
        &self.key.packed
    }

    pub fn constraints(&self) -> &[u32] {
        &self.key.constraints
    }

    pub fn weight(&self) -> &Poly {
        &self.weight
    }

    pub fn support_size(&self) -> usize {
        self.key.support_size()
    }

    pub fn size(&self) -> usize {
        self.key.packed.size()
    }

    pub fn shift(&self) -> usize {
        self.key.constraints.len()
    }

    /// `k + deg f - |C|`.
    pub fn power(&self) -> usize {
        self.size() + self.weight.total_degree().unwrap_or(0) as usize - self.shift()
    }

    pub fn cycle_path_type(&self) -> CyclePathType {
        self.key.packed.cycle_path_type()
    }

    /// Value on `π`, given in one-line notation on `1..=n`.
    pub fn evaluate(&self, pi: &[u32]) -> BigRational {
        let n = pi.len() as u32;
        let m = self.support_size();
        let packed = &self.key.packed;
        let mut total = BigRational::zero();
        let mut args = Vec::with_capacity(m);
        for_each_constrained_subset(n, m, &self.key.constraints, |l| {
            let hit = packed
                .edges()
                .all(|(u, v)| pi[l[u as usize - 1] as usize - 1] == l[v as usize - 1]);
            if hit {
                args.clear();
                args.extend(l.iter().map(|&x| rat(x as i64)));
                total += self.weight.eval(&args);
            }
        });
        total
    }
}

impl fmt::Display for ConstrainedTranslate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T(U=({});V=({});C={{{}}};f={})",
            join_u32(self.packed().positions()),
            join_u32(self.packed().values()),
            join_u32(self.constraints()),
            self.weight.display(Naming::Weights)
        )
    }
}

/// A finite linear combination of constrained translates, with weights of
/// equal `(packed, C)` merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularStatistic {
    terms: BTreeMap<TranslateKey, Poly>,
}

impl RegularStatistic {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant statistic `c`, a single translate of size zero.
    pub fn constant(c: BigRational) -> Self {
        let mut s = Self::zero();
        let key = TranslateKey::new(PartialPermutation::empty(), Vec::new()).expect("empty translate");
        s.add_term(key, Poly::constant(c));
        s
    }

    pub fn from_translate(t: ConstrainedTranslate) -> Self {
        let mut s = Self::zero();
        s.add_term(t.key, t.weight);
        s
    }

    pub fn add_term(&mut self, key: TranslateKey, weight: Poly) {
        if weight.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + &weight;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn translates(&self) -> impl Iterator<Item = ConstrainedTranslate> + '_ {
        self.terms.iter().map(|(k, w)| ConstrainedTranslate {
            key: k.clone(),
            weight: w.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.add_term(k.clone(), w.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (k, w) in &self.terms {
            out.add_term(k.clone(), w.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in self.translates() {
            for b in other.translates() {
                for (k, w) in super::product::product_terms(&a, &b) {
                    out.add_term(k, w);
                }
            }
        }
        out
    }

    pub fn pow(&self, d: u32) -> Self {
        let mut acc = Self::constant(rat(1));
        for _ in 0..d {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest size among the stored translates.
    pub fn size(&self) -> usize {
        self.translates().map(|t| t.size()).max().unwrap_or(0)
    }

    pub fn shift(&self) -> usize {
        self.translates().map(|t| t.shift()).max().unwrap_or(0)
    }

    pub fn power(&self) -> usize {
        self.translates().map(|t| t.power()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, pi: &[u32]) -> BigRational {
        self.translates().map(|t| t.evaluate(pi)).sum()
    }
}

impl fmt::Display for RegularStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.translates().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

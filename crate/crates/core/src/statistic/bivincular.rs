//! Weighted bivincular pattern counts and their translate expansions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::PartialPermutation;
use crate::error::{Error, Result};
use crate::poly::{for_each_subset, rat, Poly};

use super::translate::{RegularStatistic, TranslateKey};

/// `N^{f,g}_{σ,A,B}`: the sum of `f(I)·g(J)` over occurrences `(I, J)` of
/// `σ` in `π` with `I` increasing, `J` order-isomorphic to `σ`, adjacent
/// positions `i_{a+1} = i_a + 1` for `a ∈ A` and adjacent values
/// `y_{b+1} = y_b + 1` for `b ∈ B`, where `y_1 < … < y_k` are the sorted
/// values. `g` reads the values in position order `j_1, …, j_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivincularPattern {
    sigma: Vec<u32>,
    a: Vec<u32>,
    b: Vec<u32>,
    f: Poly,
    g: Poly,
}

impl BivincularPattern {
    pub fn new(sigma: Vec<u32>, mut a: Vec<u32>, mut b: Vec<u32>, f: Poly, g: Poly) -> Result<Self> {
        let k = sigma.len() as u32;
        if k == 0 {
            return Err(Error::Malformed("pattern must be nonempty".into()));
        }
        let mut sorted = sigma.clone();
        sorted.sort_unstable();
        if sorted != (1..=k).collect::<Vec<_>>() {
            return Err(Error::Malformed(format!("{sigma:?} is not a permutation of 1..{k}")));
        }
        for set in [&mut a, &mut b] {
            set.sort_unstable();
            set.dedup();
            if let Some(&x) = set.iter().find(|&&x| x == 0 || x >= k) {
                return Err(Error::Malformed(format!("adjacency {x} outside 1..{}", k - 1)));
            }
        }
        for w in [&f, &g] {
            if w.num_vars() > k as usize {
                return Err(Error::Malformed(format!("weight {w} uses more than {k} variables")));
            }
        }
        Ok(Self { sigma, a, b, f, g })
    }

    /// Unweighted vincular count `N_{σ,A}`.
    pub fn vincular(sigma: Vec<u32>, a: Vec<u32>) -> Result<Self> {
        Self::new(sigma, a, Vec::new(), Poly::one(), Poly::one())
    }

    pub fn size(&self) -> usize {
        self.sigma.len()
    }

    pub fn shift(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn power(&self) -> usize {
        let deg = |p: &Poly| p.total_degree().unwrap_or(0) as usize;
        self.size() + deg(&self.f) + deg(&self.g) - self.shift()
    }

    /// Every packed occurrence shape with its constraints and weight.
    pub fn compile(&self) -> RegularStatistic {
        let k = self.sigma.len();
        let mut out = RegularStatistic::zero();
        if self.f.is_zero() || self.g.is_zero() {
            return out;
        }
        for m in k..=2 * k {
            for_each_subset(m as u32, k, |u| {
                for_each_subset(m as u32, k, |y| {
                    let mut covered = vec![false; m + 1];
                    for &x in u.iter().chain(y) {
                        covered[x as usize] = true;
                    }
                    if !covered[1..].iter().all(|&c| c) {
                        return;
                    }
                    if let Some((key, weight)) = self.shape(u, y) {
                        out.add_term(key, weight);
                    }
                });
            });
        }
        out
    }

    fn shape(&self, u: &[u32], y: &[u32]) -> Option<(TranslateKey, Poly)> {
        let adjacent = |s: &[u32], x: u32| s[x as usize] == s[x as usize - 1] + 1;
        if !self.a.iter().all(|&x| adjacent(u, x)) || !self.b.iter().all(|&x| adjacent(y, x)) {
            return None;
        }
        let j: Vec<u32> = self.sigma.iter().map(|&s| y[s as usize - 1]).collect();
        let mut constraints: Vec<u32> = self.a.iter().map(|&x| u[x as usize - 1]).collect();
        constraints.extend(self.b.iter().map(|&x| y[x as usize - 1]));
        let packed = PartialPermutation::new(u.to_vec(), j.clone()).ok()?;
        let key = TranslateKey::new(packed, constraints).ok()?;
        let weight = &self.f.rename(|i| u[i] as usize - 1) * &self.g.rename(|i| j[i] as usize - 1);
        Some((key, weight))
    }

    /// Direct occurrence count on `π` (one-line notation).
    pub fn count(&self, pi: &[u32]) -> BigRational {
        let k = self.sigma.len();
        let mut total = BigRational::zero();
        for_each_subset(pi.len() as u32, k, |positions| {
            let values: Vec<u32> = positions.iter().map(|&i| pi[i as usize - 1]).collect();
            let order_iso = (0..k).all(|s| (0..k).all(|t| (values[s] < values[t]) == (self.sigma[s] < self.sigma[t])));
            if !order_iso {
                return;
            }
            let mut sorted = values.clone();
            sorted.sort_unstable();
            let adjacent = |s: &[u32], x: u32| s[x as usize] == s[x as usize - 1] + 1;
            if !self.a.iter().all(|&x| adjacent(positions, x)) || !self.b.iter().all(|&x| adjacent(&sorted, x)) {
                return;
            }
            let args = |s: &[u32]| s.iter().map(|&x| rat(x as i64)).collect::<Vec<_>>();
            total += self.f.eval(&args(positions)) * self.g.eval(&args(&values));
        });
        total
    }
}

//! Brute-force ground truth over small symmetric groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{integer_partitions, part_multiplicities, PartialPermutation};
use crate::error::{Error, Result};
use crate::poly::{factorial, rat};

pub const DEFAULT_MAX_N: u32 = 8;

fn check_n(n: u32, max_n: u32) -> Result<()> {
    if n > max_n {
        return Err(Error::ResourceLimit(format!(
            "brute force over S_{n} exceeds the cap n <= {max_n}"
        )));
    }
    Ok(())
}

/// Calls `f` on every permutation of `1..=n` in lexicographic one-line order.
pub fn for_each_permutation(n: u32, mut f: impl FnMut(&[u32])) {
    let mut p: Vec<u32> = (1..=n).collect();
    loop {
        f(&p);
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Cycle lengths of `π` in decreasing order.
pub fn cycle_type(pi: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; pi.len()];
    let mut out = Vec::new();
    for start in 0..pi.len() {
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = pi[v] as usize - 1;
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// The permutation of cycle type `λ` with cycles on consecutive integers.
pub fn class_representative(lambda: &[u32]) -> Vec<u32> {
    let mut sorted = lambda.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut pi = Vec::new();
    let mut next = 1;
    for &c in &sorted {
        for t in 0..c {
            pi.push(next + (t + 1) % c);
        }
        next += c;
    }
    pi
}

/// `n! / Π_i (i^{m_i} m_i!)`.
pub fn class_size(lambda: &[u32]) -> BigInt {
    let n: u32 = lambda.iter().sum();
    let mult = part_multiplicities(lambda);
    let mut den = BigInt::one();
    for (i, &m) in mult.iter().enumerate().skip(1) {
        den *= num_traits::pow(BigInt::from(i), m as usize) * factorial(m);
    }
    factorial(n) / den
}

/// `S_n` bucketed by cycle type.
#[derive(Clone, Debug)]
pub struct ClassTable {
    n: u32,
    classes: BTreeMap<Vec<u32>, Vec<Vec<u32>>>,
}

impl ClassTable {
    pub fn new(n: u32, max_n: u32) -> Result<Self> {
        check_n(n, max_n)?;
        let mut classes: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
        for_each_permutation(n, |p| classes.entry(cycle_type(p)).or_default().push(p.to_vec()));
        Ok(Self { n, classes })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn classes(&self) -> impl Iterator<Item = (&Vec<u32>, &Vec<Vec<u32>>)> {
        self.classes.iter()
    }

    pub fn class(&self, lambda: &[u32]) -> Option<&[Vec<u32>]> {
        let mut key = lambda.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        self.classes.get(&key).map(Vec::as_slice)
    }

    /// Every class has the size given by the class-size formula and the
    /// classes exhaust `S_n`.
    pub fn sizes_consistent(&self) -> bool {
        let total: usize = self.classes.values().map(Vec::len).sum();
        BigInt::from(total) == factorial(self.n)
            && self.classes.len() == integer_partitions(self.n).len()
            && self
                .classes
                .iter()
                .all(|(l, ps)| BigInt::from(ps.len()) == class_size(l))
    }

    /// `E_λ[Ψ^e]` for `e = 1..=d`, computing `Ψ` once per permutation.
    pub fn class_moments(
        &self,
        lambda: &[u32],
        d: u32,
        eval: impl Fn(&[u32]) -> BigRational,
    ) -> Result<Vec<BigRational>> {
        let class = self
            .class(lambda)
            .ok_or_else(|| Error::Domain(format!("{lambda:?} is not a partition of {}", self.n)))?;
        let mut sums = vec![BigRational::zero(); d as usize];
        for p in class {
            let v = eval(p);
            let mut power = BigRational::one();
            for s in sums.iter_mut() {
                power *= &v;
                *s += &power;
            }
        }
        let size = rat(class.len() as i64);
        Ok(sums.into_iter().map(|s| s / &size).collect())
    }
}

/// Exact `E_λ[Ψ^d]` by enumerating `S_n`.
pub fn class_moment(
    eval: impl Fn(&[u32]) -> BigRational,
    lambda: &[u32],
    d: u32,
    max_n: u32,
) -> Result<BigRational> {
    let n: u32 = lambda.iter().sum();
    check_n(n, max_n)?;
    let mut key = lambda.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    let mut sum = BigRational::zero();
    let mut count = 0i64;
    for_each_permutation(n, |p| {
        if cycle_type(p) == key {
            sum += num_traits::pow(eval(p), d as usize);
            count += 1;
        }
    });
    if count == 0 {
        return Err(Error::Domain(format!("{lambda:?} has no permutations")));
    }
    Ok(sum / rat(count))
}

/// Exact `E_{S_n}[Ψ^d]` by enumeration.
pub fn uniform_moment(eval: impl Fn(&[u32]) -> BigRational, n: u32, d: u32, max_n: u32) -> Result<BigRational> {
    check_n(n, max_n)?;
    let mut sum = BigRational::zero();
    let mut count = 0i64;
    for_each_permutation(n, |p| {
        sum += num_traits::pow(eval(p), d as usize);
        count += 1;
    });
    Ok(sum / rat(count))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Injectivity {
    Global,
    PerComponent,
}

/// Maps `ψ: [m] → [n]` with `π(ψ(i_t)) = ψ(j_t)` for every edge of the packed
/// `p`, counted by backtracking along the edges.
fn count_compatible(p: &PartialPermutation, pi: &[u32], mode: Injectivity) -> u64 {
    let m = p.support_size();
    let n = pi.len() as u32;
    let mut out = vec![None; m];
    let mut inn = vec![None; m];
    for (i, j) in p.edges() {
        out[i as usize - 1] = Some(j as usize - 1);
        inn[j as usize - 1] = Some(i as usize - 1);
    }
    // Visit each component from its path start (or any cycle vertex) along
    // out-edges, so every later vertex is forced by its predecessor.
    let mut order = Vec::with_capacity(m);
    let mut component = vec![usize::MAX; m];
    let mut comps = 0;
    let starts: Vec<usize> = (0..m)
        .filter(|&v| inn[v].is_none())
        .chain(0..m)
        .collect();
    for s in starts {
        if component[s] != usize::MAX {
            continue;
        }
        let mut v = s;
        while component[v] == usize::MAX {
            component[v] = comps;
            order.push(v);
            match out[v] {
                Some(w) => v = w,
                None => break,
            }
        }
        comps += 1;
    }

    struct Search<'a> {
        order: &'a [usize],
        out: &'a [Option<usize>],
        inn: &'a [Option<usize>],
        component: &'a [usize],
        pi: &'a [u32],
        n: u32,
        mode: Injectivity,
        image: Vec<u32>,
    }

    impl Search<'_> {
        fn clashes(&self, v: usize, x: u32, step: usize) -> bool {
            self.order[..step].iter().any(|&u| {
                self.image[u] == x && (self.mode == Injectivity::Global || self.component[u] == self.component[v])
            })
        }

        fn go(&mut self, step: usize) -> u64 {
            if step == self.order.len() {
                return 1;
            }
            let v = self.order[step];
            let assigned = |u: usize| self.order[..step].contains(&u);
            let forced = self.inn[v].filter(|&u| assigned(u)).map(|u| self.pi[self.image[u] as usize - 1]);
            let candidates: Vec<u32> = match forced {
                Some(x) => vec![x],
                None => (1..=self.n).collect(),
            };
            let mut total = 0;
            for x in candidates {
                if self.clashes(v, x, step) {
                    continue;
                }
                if let Some(w) = self.out[v].filter(|&w| w == v || assigned(w)) {
                    let target = if w == v { x } else { self.image[w] };
                    if self.pi[x as usize - 1] != target {
                        continue;
                    }
                }
                self.image[v] = x;
                total += self.go(step + 1);
            }
            self.image[v] = 0;
            total
        }
    }

    let mut search = Search {
        order: &order,
        out: &out,
        inn: &inn,
        component: &component,
        pi,
        n,
        mode,
        image: vec![0; m],
    };
    search.go(0)
}

fn packed_or_err(p: &PartialPermutation) -> Result<()> {
    if p.is_packed() {
        Ok(())
    } else {
        Err(Error::Malformed(format!("{p} is not packed")))
    }
}

/// Injections `φ: [m] ↪ [n]` compatible with `p` relative to `π`.
pub fn injection_count_with(p: &PartialPermutation, pi: &[u32]) -> Result<u64> {
    packed_or_err(p)?;
    Ok(count_compatible(p, pi, Injectivity::Global))
}

/// [`injection_count_with`] at the standard representative of `λ`.
pub fn injection_count(p: &PartialPermutation, lambda: &[u32], max_n: u32) -> Result<u64> {
    check_n(lambda.iter().sum(), max_n)?;
    injection_count_with(p, &class_representative(lambda))
}

/// Compatible functions injective on each connected component of `p`.
pub fn compatible_function_count_with(p: &PartialPermutation, pi: &[u32]) -> Result<u64> {
    packed_or_err(p)?;
    Ok(count_compatible(p, pi, Injectivity::PerComponent))
}

pub fn compatible_function_count(p: &PartialPermutation, lambda: &[u32], max_n: u32) -> Result<u64> {
    check_n(lambda.iter().sum(), max_n)?;
    compatible_function_count_with(p, &class_representative(lambda))
}

/// Definitional statistics, independent of any translate expansion.
pub mod definitions {
    use super::*;

    pub fn exc(pi: &[u32]) -> BigRational {
        rat(pi.iter().enumerate().filter(|(i, &v)| v as usize > i + 1).count() as i64)
    }

    pub fn des(pi: &[u32]) -> BigRational {
        rat(pi.windows(2).filter(|w| w[0] > w[1]).count() as i64)
    }

    pub fn maj(pi: &[u32]) -> BigRational {
        rat((1..pi.len()).filter(|&i| pi[i - 1] > pi[i]).sum::<usize>() as i64)
    }

    pub fn inv(pi: &[u32]) -> BigRational {
        let mut count = 0i64;
        for i in 0..pi.len() {
            for j in i + 1..pi.len() {
                if pi[i] > pi[j] {
                    count += 1;
                }
            }
        }
        rat(count)
    }

    pub fn fix(pi: &[u32]) -> BigRational {
        rat(pi.iter().enumerate().filter(|(i, &v)| v as usize == i + 1).count() as i64)
    }

    /// Occurrences of the classical pattern `σ`.
    pub fn pattern_count(sigma: &[u32], pi: &[u32]) -> BigRational {
        let k = sigma.len();
        let mut count = 0i64;
        crate::poly::for_each_subset(pi.len() as u32, k, |pos| {
            let vals: Vec<u32> = pos.iter().map(|&i| pi[i as usize - 1]).collect();
            if (0..k).all(|s| (0..k).all(|t| (vals[s] < vals[t]) == (sigma[s] < sigma[t]))) {
                count += 1;
            }
        });
        rat(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::frac;

    fn pp(i: &[u32], j: &[u32]) -> PartialPermutation {
        PartialPermutation::new(i.to_vec(), j.to_vec()).unwrap()
    }

    #[test]
    fn class_tables_are_consistent() {
        for n in 0..=6 {
            assert!(ClassTable::new(n, DEFAULT_MAX_N).unwrap().sizes_consistent(), "n = {n}");
        }
        assert!(ClassTable::new(9, DEFAULT_MAX_N).is_err());
        let mut count = 0;
        let mut prev: Option<Vec<u32>> = None;
        for_each_permutation(4, |p| {
            if let Some(q) = &prev {
                assert!(q.as_slice() < p);
            }
            prev = Some(p.to_vec());
            count += 1;
        });
        assert_eq!(count, 24);
    }

    #[test]
    fn class_moment_examples() {
        assert_eq!(class_moment(definitions::exc, &[3], 1, 8).unwrap(), frac(3, 2));
        assert_eq!(class_moment(definitions::exc, &[3], 2, 8).unwrap(), frac(5, 2));
        assert_eq!(class_moment(definitions::maj, &[1, 1, 1, 1], 1, 8).unwrap(), rat(0));
        let table = ClassTable::new(3, 8).unwrap();
        assert_eq!(table.class_moments(&[3], 2, definitions::exc).unwrap(), vec![frac(3, 2), frac(5, 2)]);
        assert!(class_moment(definitions::exc, &[9], 1, 8).is_err());
    }

    #[test]
    fn injection_examples() {
        assert_eq!(injection_count(&pp(&[1], &[1]), &[2, 1], 8).unwrap(), 1);
        assert_eq!(injection_count(&pp(&[1, 2], &[2, 3]), &[3], 8).unwrap(), 3);
        assert_eq!(injection_count(&pp(&[1, 2], &[2, 1]), &[2, 1], 8).unwrap(), 2);
    }

    #[test]
    fn compatible_examples() {
        for lambda in [vec![3, 1], vec![2, 2], vec![1, 1, 1]] {
            let fixed = part_multiplicities(&lambda).get(1).copied().unwrap_or(0) as u64;
            assert_eq!(compatible_function_count(&pp(&[1], &[1]), &lambda, 8).unwrap(), fixed);
        }
        assert_eq!(compatible_function_count(&pp(&[1, 2], &[2, 3]), &[2, 2], 8).unwrap(), 0);
        assert_eq!(compatible_function_count(&pp(&[1, 2], &[2, 1]), &[2, 2], 8).unwrap(), 4);
    }

    #[test]
    fn counts_do_not_depend_on_the_representative() {
        let shapes = [pp(&[1, 2], &[2, 3]), pp(&[1, 2, 3], &[2, 1, 4]), pp(&[1, 3], &[2, 4])];
        for n in 1..=5 {
            let table = ClassTable::new(n, 8).unwrap();
            for (_, class) in table.classes() {
                for p in &shapes {
                    let first = injection_count_with(p, &class[0]).unwrap();
                    let last = injection_count_with(p, class.last().unwrap()).unwrap();
                    assert_eq!(first, last);
                    let first = compatible_function_count_with(p, &class[0]).unwrap();
                    let last = compatible_function_count_with(p, class.last().unwrap()).unwrap();
                    assert_eq!(first, last);
                }
            }
        }
    }
}

//! Products of constrained translates.
//!
//! A pair of index sets `(M, L)` from the two factors corresponds to its union
//! `S` together with two order-preserving injections of `[m]` and `[ℓ]` into
//! `[|S|]` whose images cover it. Each such overlap pattern yields at most one
//! translate of the product.

use crate::combinatorics::PartialPermutation;
use crate::poly::Poly;

use super::translate::{ConstrainedTranslate, TranslateKey};

type Visit<'a> = dyn FnMut(&[u32], &[u32], u32) + 'a;

/// The translates of `a · b`, one per consistent overlap pattern (keys may
/// repeat).
pub fn product_terms(a: &ConstrainedTranslate, b: &ConstrainedTranslate) -> Vec<(TranslateKey, Poly)> {
    let (m, l) = (a.support_size(), b.support_size());
    let mut out = Vec::new();
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(l);
    let adjacent = |t: &ConstrainedTranslate| {
        let mut v = vec![false; t.support_size()];
        for &c in t.constraints() {
            v[c as usize] = true;
        }
        v
    };
    let glue = (adjacent(a), adjacent(b));
    overlaps(m, l, 1, &glue, &mut alpha, &mut beta, &mut |alpha, beta, r| {
        if let Some(term) = merge(a, b, alpha, beta, r) {
            out.push(term);
        }
    });
    out
}

/// Visits every pair of increasing maps `[m] → [r]`, `[l] → [r]` with jointly
/// surjective images, building both maps left to right. `glue.0[i]` asks that
/// `alpha[i]` directly follow `alpha[i - 1]`, and likewise for `beta`.
fn overlaps(
    m: usize,
    l: usize,
    next: u32,
    glue: &(Vec<bool>, Vec<bool>),
    alpha: &mut Vec<u32>,
    beta: &mut Vec<u32>,
    visit: &mut Visit,
) {
    let (i, j) = (alpha.len(), beta.len());
    if i == m && j == l {
        visit(alpha, beta, next - 1);
        return;
    }
    // A glued index must be placed right after its predecessor.
    let can_a = i < m && !(glue.0[i] && alpha[i - 1] + 1 != next);
    let can_b = j < l && !(glue.1[j] && beta[j - 1] + 1 != next);
    let must_a = i < m && i > 0 && glue.0[i] && alpha[i - 1] + 1 == next;
    let must_b = j < l && j > 0 && glue.1[j] && beta[j - 1] + 1 == next;
    if can_a && !must_b {
        alpha.push(next);
        overlaps(m, l, next + 1, glue, alpha, beta, visit);
        alpha.pop();
    }
    if can_b && !must_a {
        beta.push(next);
        overlaps(m, l, next + 1, glue, alpha, beta, visit);
        beta.pop();
    }
    if can_a && can_b {
        alpha.push(next);
        beta.push(next);
        overlaps(m, l, next + 1, glue, alpha, beta, visit);
        alpha.pop();
        beta.pop();
    }
}

fn merge(
    a: &ConstrainedTranslate,
    b: &ConstrainedTranslate,
    alpha: &[u32],
    beta: &[u32],
    r: u32,
) -> Option<(TranslateKey, Poly)> {
    let r = r as usize;
    let mut out: Vec<Option<u32>> = vec![None; r + 1];
    let mut inn: Vec<Option<u32>> = vec![None; r + 1];
    for (t, map) in [(a, alpha), (b, beta)] {
        for (u, v) in t.packed().edges() {
            let (x, y) = (map[u as usize - 1], map[v as usize - 1]);
            if *out[x as usize].get_or_insert(y) != y || *inn[y as usize].get_or_insert(x) != x {
                return None;
            }
        }
    }
    let mut constraints = Vec::new();
    for (t, map) in [(a, alpha), (b, beta)] {
        for &c in t.constraints() {
            let (lo, hi) = (map[c as usize - 1], map[c as usize]);
            // Adjacent indices of one factor must stay adjacent in the union.
            if hi != lo + 1 {
                return None;
            }
            constraints.push(lo);
        }
    }
    let (positions, values): (Vec<u32>, Vec<u32>) = (1..=r as u32)
        .filter_map(|x| out[x as usize].map(|y| (x, y)))
        .unzip();
    let packed = PartialPermutation::new(positions, values).ok()?;
    let key = TranslateKey::new(packed, constraints).ok()?;
    let wa = a.weight().rename(|i| alpha[i] as usize - 1);
    let wb = b.weight().rename(|i| beta[i] as usize - 1);
    Some((key, &wa * &wb))
}

#[cfg(test)]
mod tests {
    use super::super::RegularStatistic;
    use super::*;
    use crate::poly::rat;

    fn translate(u: &[u32], v: &[u32], c: &[u32], w: Poly) -> ConstrainedTranslate {
        ConstrainedTranslate::new(
            PartialPermutation::new(u.to_vec(), v.to_vec()).unwrap(),
            c.to_vec(),
            w,
        )
        .unwrap()
    }

    fn all_perms(n: u32) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for k in 1..=n {
            let mut next = Vec::new();
            for p in &out {
                for pos in 0..k as usize {
                    let mut q: Vec<u32> = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    fn free(m: usize, l: usize) -> (Vec<bool>, Vec<bool>) {
        (vec![false; m], vec![false; l])
    }

    #[test]
    fn overlap_count_is_delannoy() {
        let mut count = 0;
        overlaps(2, 2, 1, &free(2, 2), &mut Vec::new(), &mut Vec::new(), &mut |_, _, _| count += 1);
        assert_eq!(count, 13);
        let mut count = 0;
        overlaps(3, 3, 1, &free(3, 3), &mut Vec::new(), &mut Vec::new(), &mut |_, _, _| count += 1);
        assert_eq!(count, 63);
    }

    #[test]
    fn fixed_point_square() {
        let fix = RegularStatistic::from_translate(translate(&[1], &[1], &[], Poly::one()));
        let sq = fix.mul(&fix);
        let two = translate(&[1, 2], &[1, 2], &[], Poly::int(2));
        let expected = RegularStatistic::from_translate(two).add(&fix);
        assert_eq!(sq, expected);
        for pi in all_perms(4) {
            let v = fix.evaluate(&pi);
            assert_eq!(sq.evaluate(&pi), &v * &v);
        }
    }

    #[test]
    fn exc_square_has_diagonal_term() {
        let exc_t = translate(&[1], &[2], &[], Poly::one());
        let exc = RegularStatistic::from_translate(exc_t.clone());
        let sq = exc.mul(&exc);
        let diag = sq.translates().find(|t| t.key() == exc_t.key()).unwrap();
        assert_eq!(*diag.weight(), Poly::one());
        for pi in all_perms(4) {
            let v = exc.evaluate(&pi);
            assert_eq!(sq.evaluate(&pi), &v * &v);
        }
    }

    #[test]
    fn constant_is_identity() {
        let t = translate(&[1, 2], &[2, 1], &[1], Poly::var(1));
        let s = RegularStatistic::from_translate(t);
        assert_eq!(s.mul(&RegularStatistic::constant(rat(1))), s);
        assert_eq!(RegularStatistic::constant(rat(1)).mul(&s), s);
    }

    #[test]
    fn vincular_product_is_pointwise() {
        let a = RegularStatistic::from_translate(translate(&[1, 2], &[2, 1], &[1], Poly::var(0)));
        let b = RegularStatistic::from_translate(translate(&[1, 2], &[3, 1], &[1], Poly::one()));
        let ab = a.mul(&b);
        for pi in all_perms(5) {
            assert_eq!(ab.evaluate(&pi), a.evaluate(&pi) * b.evaluate(&pi));
        }
    }
}

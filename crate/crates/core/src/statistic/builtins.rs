//! Named statistics.

use crate::combinatorics::PartialPermutation;
use crate::error::{Error, Result};
use crate::poly::Poly;

use super::bivincular::BivincularPattern;
use super::translate::{ConstrainedTranslate, RegularStatistic};

fn single(u: &[u32], v: &[u32], c: &[u32], weight: Poly) -> RegularStatistic {
    let packed = PartialPermutation::new(u.to_vec(), v.to_vec()).expect("builtin shape");
    RegularStatistic::from_translate(ConstrainedTranslate::new(packed, c.to_vec(), weight).expect("builtin shape"))
}

/// Excedances, `#{i : π(i) > i}`.
pub fn exc() -> RegularStatistic {
    single(&[1], &[2], &[], Poly::one())
}

/// Fixed points.
pub fn fix() -> RegularStatistic {
    single(&[1], &[1], &[], Poly::one())
}

/// Two-cycles.
pub fn cyc2() -> RegularStatistic {
    single(&[1, 2], &[2, 1], &[], Poly::one())
}

/// Descents, `N_{21,{1}}`.
pub fn des() -> RegularStatistic {
    pattern(&[2, 1], &[1]).compile()
}

/// Inversions, `N_{21}`.
pub fn inv() -> RegularStatistic {
    pattern(&[2, 1], &[]).compile()
}

fn pattern(sigma: &[u32], a: &[u32]) -> BivincularPattern {
    BivincularPattern::vincular(sigma.to_vec(), a.to_vec()).expect("builtin pattern")
}

/// The major index `Σ_{π_i > π_{i+1}} i` as eight vincular translates, one
/// for each way the descent pair `(i, i+1)` can overlap its two values.
pub fn maj() -> RegularStatistic {
    let x = Poly::var;
    let shapes: [(&[u32], &[u32], u32, usize); 8] = [
        (&[1, 2], &[2, 1], 1, 0),
        (&[1, 2], &[3, 1], 1, 0),
        (&[1, 2], &[3, 2], 1, 0),
        (&[2, 3], &[2, 1], 2, 1),
        (&[2, 3], &[3, 1], 2, 1),
        (&[1, 2], &[4, 3], 1, 0),
        (&[2, 3], &[4, 1], 2, 1),
        (&[3, 4], &[2, 1], 3, 2),
    ];
    shapes
        .iter()
        .fold(RegularStatistic::zero(), |acc, &(u, v, c, w)| acc.add(&single(u, v, &[c], x(w))))
}

/// Looks up a named statistic: `exc`, `des`, `maj`, `inv`, `fix` (or
/// `fixpoints`) and `cyc2`.
pub fn builtin(name: &str) -> Result<RegularStatistic> {
    Ok(match name {
        "exc" => exc(),
        "des" => des(),
        "maj" => maj(),
        "inv" => inv(),
        "fix" | "fixpoints" => fix(),
        "cyc2" => cyc2(),
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

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

    #[test]
    fn maj_matches_definition() {
        let maj = maj();
        assert_eq!(maj.num_terms(), 8);
        assert_eq!(maj.evaluate(&[2, 1]), rat(1));
        for pi in all_perms(5) {
            let direct: usize = (1..pi.len()).filter(|&i| pi[i - 1] > pi[i]).sum();
            assert_eq!(maj.evaluate(&pi), rat(direct as i64), "{pi:?}");
        }
    }

    #[test]
    fn small_builtins() {
        assert_eq!(exc().evaluate(&[2, 3, 1]), rat(2));
        assert_eq!(fix().evaluate(&[1, 3, 2]), rat(1));
        assert_eq!(cyc2().evaluate(&[2, 1, 4, 3]), rat(2));
        assert_eq!(inv().evaluate(&[3, 2, 1]), rat(3));
        assert_eq!(des().evaluate(&[3, 1, 2]), rat(1));
        assert!(matches!(builtin("nope"), Err(Error::UnknownBuiltin(_))));
    }
}

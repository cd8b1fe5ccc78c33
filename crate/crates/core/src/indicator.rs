//! Class-wise expectations of indicators `1_{IJ}`.
//!
//! For a packed partial permutation of type `(μ, ν)` on `m` vertices, the
//! number of injections `φ: [m] → [n]` compatible with a fixed `π` of type `λ`
//! is obtained by Möbius inversion over `Π_m` from the number of all
//! compatible functions constant on the blocks of each `ρ`. Those functions
//! factor through the closed quotient graph, where each cycle of length `s`
//! lands on a point of a `π`-cycle whose length divides `s` and each path is
//! fixed by its first vertex.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    for_each_growth_string, mobius_from_sizes, Contractor, CyclePathType, PartialPermutation,
};
use crate::error::{Error, Result};
use crate::expectation::RationalExpectation;
use crate::poly::{Naming, Poly, PolyJson};

pub const DEFAULT_SUPPORT_CAP: usize = 12;

/// Compatible functions injective on every component:
/// `Π_i (i·m_i)^{m_i(μ)} · Π_ℓ (n - Σ_{i≤ℓ} i·m_i)^{m_ℓ(ν)}`.
pub fn c_poly(t: &CyclePathType) -> Poly {
    let mut out = Poly::one();
    for &s in t.cycles() {
        out = &out * &Poly::var(s as usize).scale(&BigRational::from_integer(BigInt::from(s)));
    }
    for &l in t.paths() {
        let mut factor = Poly::var(0);
        for i in 1..=l as usize {
            factor = &factor - &Poly::var(i).scale(&BigRational::from_integer(BigInt::from(i)));
        }
        out = &out * &factor;
    }
    out
}

/// All compatible functions, injective or not:
/// `Π_{cycles s} (Σ_{i | s} i·m_i) · n^{len(ν)}`.
pub fn compatible_all_poly(t: &CyclePathType) -> Poly {
    let mut out = Poly::var(0).pow(t.paths().len() as u32);
    for &s in t.cycles() {
        let mut factor = Poly::zero();
        for i in (1..=s).filter(|i| s % i == 0) {
            factor = &factor + &Poly::var(i as usize).scale(&BigRational::from_integer(BigInt::from(i)));
        }
        out = &out * &factor;
    }
    out
}

/// `f_{(μ,ν)}` together with its expectation `f / (n)_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorMomentResult {
    pub kind: CyclePathType,
    pub support: usize,
    pub poly: Poly,
    pub expectation: RationalExpectation,
}

impl IndicatorMomentResult {
    fn from_poly(kind: CyclePathType, poly: Poly) -> Self {
        let support = kind.support_size();
        let expectation = RationalExpectation::new(poly.clone(), vec![support as u32]);
        Self {
            kind,
            support,
            poly,
            expectation,
        }
    }
}

fn bell(m: usize) -> BigInt {
    let mut row = vec![BigInt::from(1)];
    for _ in 0..m {
        let mut next = vec![row.last().unwrap().clone()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Computes `f_{(μ,ν)}` without caching.
pub fn indicator_poly(t: &CyclePathType, support_cap: usize) -> Result<Poly> {
    let m = t.support_size();
    if m > support_cap {
        return Err(Error::ResourceLimit(format!(
            "type {t} has support {m}, which needs Bell({m}) = {} set partitions; the cap is {support_cap}",
            bell(m)
        )));
    }
    let contractor = Contractor::new(&t.representative())?;
    let mut weights: HashMap<CyclePathType, i128> = HashMap::new();
    let mut sizes = Vec::with_capacity(m);
    for_each_growth_string(m, |labels| {
        sizes.clear();
        for &l in labels {
            if l >= sizes.len() {
                sizes.resize(l + 1, 0);
            }
            sizes[l] += 1;
        }
        let mobius = mobius_from_sizes(&sizes, m);
        let q = contractor.quotient_of_labels(labels);
        *weights.entry(q.kind).or_insert(0) += mobius;
    });
    let mut f = Poly::zero();
    let mut kinds: Vec<_> = weights.into_iter().filter(|(_, w)| *w != 0).collect();
    kinds.sort();
    for (kind, w) in kinds {
        f = &f + &compatible_all_poly(&kind).scale(&BigRational::from_integer(BigInt::from(w)));
    }
    let k = t.size() as u32;
    if f.graded_degree() != Some(k) {
        return Err(Error::Consistency(format!(
            "f for {t} has graded degree {:?}, expected {k}",
            f.graded_degree()
        )));
    }
    Ok(f)
}

/// Every top-degree monomial `n^{a_0} m_1^{a_1} ⋯` of `f_{(μ,ν)}` has
/// `a_1 ≥ m_1(μ)` and `a_0 + a_1 ≤ m_1(μ) + m_1(ν)`. Returns the offending
/// monomials.
pub fn top_degree_violations(t: &CyclePathType, f: &Poly) -> Vec<Vec<u32>> {
    let k = t.size() as u32;
    let fixed = t.cycle_multiplicity(1) as u32;
    let ones = fixed + t.path_multiplicity(1) as u32;
    f.terms()
        .map(|(e, _)| e)
        .filter(|e| crate::poly::graded_degree_of(e) == k)
        .filter(|e| {
            let a0 = e.first().copied().unwrap_or(0);
            let a1 = e.get(1).copied().unwrap_or(0);
            a1 < fixed || a0 + a1 > ones
        })
        .cloned()
        .collect()
}

type Slot = Arc<OnceLock<Result<Arc<IndicatorMomentResult>>>>;

/// Memoizing front end for indicator moments.
///
/// Each type is computed at most once even under concurrent requests: callers
/// racing on the same type share one slot and block on its initialization.
#[derive(Debug)]
pub struct Engine {
    support_cap: usize,
    cache: Mutex<HashMap<CyclePathType, Slot>>,
    disk: Option<PathBuf>,
    computed: std::sync::atomic::AtomicUsize,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(DEFAULT_SUPPORT_CAP)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct DiskCache(std::collections::BTreeMap<String, PolyJson>);

impl Engine {
    pub fn new(support_cap: usize) -> Self {
        Self {
            support_cap,
            cache: Mutex::new(HashMap::new()),
            disk: None,
            computed: Default::default(),
        }
    }

    /// Loads previously computed polynomials from `path` if it exists; see
    /// [`Engine::persist`].
    pub fn with_disk_cache(support_cap: usize, path: &Path) -> Result<Self> {
        let mut engine = Self::new(support_cap);
        engine.disk = Some(path.to_path_buf());
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let DiskCache(map) = serde_json::from_str(&text)?;
            let mut cache = engine.cache.lock().unwrap();
            for (key, json) in map {
                let kind = CyclePathType::parse_key(&key)?;
                let poly = Poly::from_json(&json, Naming::Graded)?;
                let slot: Slot = Arc::new(OnceLock::new());
                let _ = slot.set(Ok(Arc::new(IndicatorMomentResult::from_poly(kind.clone(), poly))));
                cache.insert(kind, slot);
            }
        }
        Ok(engine)
    }

    pub fn support_cap(&self) -> usize {
        self.support_cap
    }

    /// Number of polynomials computed (not loaded) by this engine.
    pub fn computed_count(&self) -> usize {
        self.computed.load(std::sync::atomic::Ordering::SeqCst)
    }

    pub fn indicator_moment(&self, t: &CyclePathType) -> Result<Arc<IndicatorMomentResult>> {
        let slot = {
            let mut cache = self.cache.lock().unwrap();
            cache.entry(t.clone()).or_default().clone()
        };
        slot.get_or_init(|| {
            self.computed.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            indicator_poly(t, self.support_cap)
                .map(|poly| Arc::new(IndicatorMomentResult::from_poly(t.clone(), poly)))
        })
        .clone()
    }

    /// `P[π(i_t) = j_t for all t]` for `π` uniform of cycle type `λ`.
    pub fn indicator_expectation(&self, p: &PartialPermutation, lambda: &[u32]) -> Result<BigRational> {
        let n: u32 = lambda.iter().sum();
        if let Some(&top) = p.support().last() {
            if top > n {
                return Err(Error::Domain(format!("support reaches {top} but n = {n}")));
            }
        }
        self.indicator_moment(&p.cycle_path_type())?
            .expectation
            .evaluate_at(lambda)
    }

    /// Writes every successfully computed polynomial to the disk cache, as a
    /// JSON map from keys like `mu=[2,1];nu=[2]` to polynomials.
    pub fn persist(&self) -> Result<()> {
        let Some(path) = &self.disk else {
            return Ok(());
        };
        let cache = self.cache.lock().unwrap();
        let map = cache
            .iter()
            .filter_map(|(kind, slot)| match slot.get() {
                Some(Ok(r)) => Some((kind.key(), r.poly.to_json(Naming::Graded))),
                _ => None,
            })
            .collect();
        let text = serde_json::to_string_pretty(&DiskCache(map))?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{frac, rat};

    fn cpt(mu: &[u32], nu: &[u32]) -> CyclePathType {
        CyclePathType::new(mu.to_vec(), nu.to_vec()).unwrap()
    }
    fn n() -> Poly {
        Poly::var(0)
    }
    fn m(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn c_poly_examples() {
        assert_eq!(c_poly(&cpt(&[1], &[])), m(1));
        assert_eq!(c_poly(&cpt(&[2], &[])), m(2).scale(&rat(2)));
        assert_eq!(c_poly(&cpt(&[], &[2])), &(&n() - &m(1)) - &m(2).scale(&rat(2)));
        for k in 0..=4 {
            for t in CyclePathType::all_of_size(k) {
                assert_eq!(c_poly(&t).graded_degree(), Some(k as u32));
            }
        }
    }

    #[test]
    fn indicator_examples() {
        let engine = Engine::default();
        assert_eq!(engine.indicator_moment(&cpt(&[1], &[])).unwrap().poly, m(1));
        assert_eq!(engine.indicator_moment(&cpt(&[], &[1])).unwrap().poly, &n() - &m(1));
        assert_eq!(
            engine.indicator_moment(&cpt(&[], &[2])).unwrap().poly,
            &(&n() - &m(1)) - &m(2).scale(&rat(2))
        );
        assert_eq!(engine.indicator_moment(&cpt(&[2], &[])).unwrap().poly, m(2).scale(&rat(2)));
        assert_eq!(engine.indicator_moment(&cpt(&[], &[])).unwrap().poly, Poly::one());
    }

    #[test]
    fn indicator_expectation_examples() {
        let engine = Engine::default();
        let pp = |i: &[u32], j: &[u32]| PartialPermutation::new(i.to_vec(), j.to_vec()).unwrap();
        assert_eq!(engine.indicator_expectation(&pp(&[1], &[1]), &[2, 1]).unwrap(), frac(1, 3));
        assert_eq!(engine.indicator_expectation(&pp(&[1, 2], &[2, 1]), &[2, 2]).unwrap(), frac(1, 3));
        assert_eq!(engine.indicator_expectation(&pp(&[1], &[2]), &[3]).unwrap(), frac(1, 2));
        assert!(matches!(
            engine.indicator_expectation(&pp(&[1], &[5]), &[3]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let engine = Engine::new(4);
        let err = engine.indicator_moment(&cpt(&[], &[1, 1, 1])).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(ref s) if s.contains("Bell(6) = 203")));
    }

    #[test]
    fn single_flight_under_contention() {
        let engine = Arc::new(Engine::default());
        let t = cpt(&[2], &[2, 1]);
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let engine = Arc::clone(&engine);
                let t = t.clone();
                std::thread::spawn(move || engine.indicator_moment(&t).unwrap())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| Arc::ptr_eq(&w[0], &w[1])));
        assert_eq!(engine.computed_count(), 1);
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("permstat-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.json");
        let _ = std::fs::remove_file(&path);
        let t = cpt(&[1], &[2]);
        let first = Engine::with_disk_cache(12, &path).unwrap();
        let poly = first.indicator_moment(&t).unwrap().poly.clone();
        first.persist().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("mu=[1];nu=[2]"));
        let second = Engine::with_disk_cache(12, &path).unwrap();
        assert_eq!(second.indicator_moment(&t).unwrap().poly, poly);
        assert_eq!(second.computed_count(), 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

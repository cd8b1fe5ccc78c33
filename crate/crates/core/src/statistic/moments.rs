//! Symbolic moments of regular statistics.
//!
//! For a translate with support `m`, shift `q` and weight `f`,
//! `(n)_m · E_λ[T] = S_{C,f}(n) · f_{(μ,ν)}(n, m_1, …)` where `S_{C,f}` is the
//! constrained sum of the weight, and under the uniform measure
//! `E[T] = S_{C,f}(n) / (n)_k`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::combinatorics::CyclePathType;

use crate::error::{Error, Result};
use crate::expectation::{ExpectationBySupport, RationalExpectation};
use crate::indicator::Engine;
use crate::poly::{constrained_sum, Poly};

use super::translate::RegularStatistic;

/// `E[Ψ^d]` together with the bookkeeping of its degree bound.
#[derive(Clone, Debug)]
pub struct Moment {
    pub d: u32,
    /// Size, shift and power of the expansion of `Ψ`.
    pub size: usize,
    pub shift: usize,
    pub power: usize,
    /// Number of translates in the expansion of `Ψ^d`.
    pub expansion_terms: usize,
    pub by_support: ExpectationBySupport,
    pub total: RationalExpectation,
    /// `(n)_{dq} · E[Ψ^d]`.
    pub normalized: Poly,
    pub degree: Option<u32>,
    /// `dp + dq`.
    pub bound: u32,
}

impl Moment {
    pub fn evaluate_at(&self, lambda: &[u32]) -> Result<BigRational> {
        self.by_support.evaluate_at(lambda)
    }

    pub fn evaluate_uniform(&self, n: u32) -> Result<BigRational> {
        self.by_support.evaluate_uniform(n)
    }

    fn finish(psi: &RegularStatistic, d: u32, expansion_terms: usize, by_support: ExpectationBySupport) -> Result<Self> {
        let (size, shift, power) = (psi.size(), psi.shift(), psi.power());
        let total = by_support.total();
        let dq = d * shift as u32;
        let normalized = total.over_falling(dq)?;
        let degree = normalized.graded_degree();
        let bound = d * (power + shift) as u32;
        if degree.is_some_and(|deg| deg > bound) {
            return Err(Error::Consistency(format!(
                "(n)_{dq} E[Psi^{d}] has degree {} above the bound dp + dq = {bound}",
                degree.unwrap()
            )));
        }
        Ok(Self {
            d,
            size,
            shift,
            power,
            expansion_terms,
            by_support,
            total,
            normalized,
            degree,
            bound,
        })
    }
}

/// `E_λ[Ψ]` as a function of `n, m_1, m_2, …`, split by support size.
///
/// Translates sharing support size, constraints and cycle-path type are
/// summed through their weights first, since `S_{C,f}` is linear in `f`.
pub fn expectation(engine: &Engine, psi: &RegularStatistic) -> Result<ExpectationBySupport> {
    let mut groups: BTreeMap<(usize, Vec<u32>, CyclePathType), Poly> = BTreeMap::new();
    for t in psi.translates() {
        let key = (t.support_size(), t.constraints().to_vec(), t.cycle_path_type());
        let slot = groups.entry(key).or_default();
        *slot = &*slot + t.weight();
    }
    let mut out = ExpectationBySupport::new();
    for ((m, constraints, kind), weight) in groups {
        if weight.is_zero() {
            continue;
        }
        let sum = constrained_sum(&weight, m, &constraints)?;
        let f = engine.indicator_moment(&kind)?;
        out.add_layer(m as u32, &RationalExpectation::new(&sum.sum * &f.poly, vec![m as u32]));
    }
    Ok(out)
}

/// `E_λ[Ψ^d]`; fails with a consistency error if the degree bound is broken.
pub fn moment(engine: &Engine, psi: &RegularStatistic, d: u32) -> Result<Moment> {
    if d == 0 {
        return Err(Error::Malformed("moment order must be at least 1".into()));
    }
    let power = psi.pow(d);
    let by_support = expectation(engine, &power)?;
    Moment::finish(psi, d, power.num_terms(), by_support)
}

/// `E_{S_n}[Ψ^d]`, a rational function of `n` alone.
pub fn uniform_moment(psi: &RegularStatistic, d: u32) -> Result<Moment> {
    if d == 0 {
        return Err(Error::Malformed("moment order must be at least 1".into()));
    }
    let power = psi.pow(d);
    let mut groups: BTreeMap<(usize, Vec<u32>, usize), Poly> = BTreeMap::new();
    for t in power.translates() {
        let slot = groups.entry((t.support_size(), t.constraints().to_vec(), t.size())).or_default();
        *slot = &*slot + t.weight();
    }
    let mut by_support = ExpectationBySupport::new();
    for ((m, constraints, k), weight) in groups {
        if weight.is_zero() {
            continue;
        }
        let sum = constrained_sum(&weight, m, &constraints)?;
        by_support.add_layer(m as u32, &RationalExpectation::new(sum.sum, vec![k as u32]));
    }
    Moment::finish(psi, d, power.num_terms(), by_support)
}

/// `E_λ[Ψ^2] - E_λ[Ψ]^2`.
#[derive(Clone, Debug)]
pub struct Variance {
    pub first: Moment,
    pub second: Moment,
    pub variance: RationalExpectation,
}

impl Variance {
    pub fn evaluate_at(&self, lambda: &[u32]) -> Result<BigRational> {
        let mean = self.first.evaluate_at(lambda)?;
        Ok(self.second.evaluate_at(lambda)? - &mean * &mean)
    }
}

pub fn variance(engine: &Engine, psi: &RegularStatistic) -> Result<Variance> {
    let first = moment(engine, psi, 1)?;
    let second = moment(engine, psi, 2)?;
    let variance = second.total.sub(&first.total.mul(&first.total));
    Ok(Variance {
        first,
        second,
        variance,
    })
}

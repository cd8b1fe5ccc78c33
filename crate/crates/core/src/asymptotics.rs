//! Graded decompositions and scaling limits of moments.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expectation::RationalExpectation;
use crate::indicator::Engine;
use crate::poly::{graded_degree_of, Naming, Poly};
use crate::statistic::{moment, variance, RegularStatistic};

/// `E(n, y_1 n, y_2 n^2, …) = Σ_{ℓ ≤ top} n^ℓ g_ℓ(y_1, y_2, …) + O(n^{bottom - 1})`,
/// the expansion of an expectation in the scaled variables `y_i = m_i / n^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    pub top: i64,
    pub bottom: i64,
    /// `g_ℓ` in the scaled variables ([`Naming::Scaled`]); absent layers are 0.
    pub layers: BTreeMap<i64, Poly>,
}

impl GradedDecomposition {
    pub fn layer(&self, l: i64) -> Poly {
        self.layers.get(&l).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Poly {
        self.layer(self.top)
    }

    /// The part of `g_ℓ` involving only `y_1`.
    pub fn fixed_point_part(&self, l: i64) -> Poly {
        self.layer(l).filter_terms(|e| e.len() <= 1)
    }
}

/// Expands `e` down to `n^{top - depth}`; fails if a layer above `n^top` is
/// nonzero.
pub fn decompose(e: &RationalExpectation, top: i64, depth: u32) -> Result<GradedDecomposition> {
    let bottom = top - depth as i64;
    let mut by_degree: BTreeMap<i64, Poly> = BTreeMap::new();
    for (exps, c) in e.numerator().terms() {
        let scaled = exps.get(1..).map(<[u32]>::to_vec).unwrap_or_default();
        let slot = by_degree.entry(graded_degree_of(exps) as i64).or_default();
        *slot = &*slot + &Poly::monomial(scaled, c.clone());
    }
    // Π (n)_a = n^deg Σ_j d_j n^{-j} with d_0 = 1; invert as a series in 1/n.
    let den = e.denominator_poly();
    let deg = den.degree_in(0).unwrap_or(0) as i64;
    let coeffs = den.coefficients_in(0);
    let d = |j: i64| -> BigRational {
        coeffs
            .get(&((deg - j) as u32))
            .map(Poly::constant_term)
            .unwrap_or_else(BigRational::zero)
    };
    let highest = by_degree.keys().next_back().copied().unwrap_or(bottom + deg) - deg;
    let span = (highest.max(top) - bottom) as usize;
    let mut inv: Vec<BigRational> = vec![BigRational::from_integer(1.into())];
    for j in 1..=span as i64 {
        let mut c = BigRational::zero();
        for i in 1..=j.min(deg) {
            c -= d(i) * &inv[(j - i) as usize];
        }
        inv.push(c);
    }
    let mut layers = BTreeMap::new();
    for l in (bottom..=highest.max(top)).rev() {
        let mut g = Poly::zero();
        for (j, c) in inv.iter().enumerate() {
            if let Some(nl) = by_degree.get(&(l + deg + j as i64)) {
                g = &g + &nl.scale(c);
            }
        }
        if g.is_zero() {
            continue;
        }
        if l > top {
            return Err(Error::Consistency(format!(
                "expansion has a term n^{l} * ({}) above n^{top}",
                g.display(Naming::Scaled)
            )));
        }
        layers.insert(l, g);
    }
    Ok(GradedDecomposition { top, bottom, layers })
}

/// `f(α) = lim E_λ[Ψ] / n^p` along `m_1/n → α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaLimit {
    pub power: u32,
    /// Polynomial in `alpha` ([`Naming::Limit`]).
    pub f: Poly,
}

impl AlphaLimit {
    pub fn at(&self, alpha: &BigRational) -> BigRational {
        self.f.eval(&[alpha.clone(), BigRational::zero()])
    }

    pub fn text(&self) -> String {
        self.f.display(Naming::Limit)
    }
}

pub fn alpha_limit(engine: &Engine, psi: &RegularStatistic) -> Result<AlphaLimit> {
    let power = psi.power() as u32;
    let mean = moment(engine, psi, 1)?;
    let lim = mean.total.limit_ratio(power as i32)?;
    let f = lim.substitute(1, &Poly::zero());
    let bound = power + psi.shift() as u32;
    if f.degree_in(0).is_some_and(|deg| deg > bound) {
        return Err(Error::Consistency(format!(
            "limit {} has degree above {bound}",
            f.display(Naming::Limit)
        )));
    }
    Ok(AlphaLimit { power, f })
}

/// `lim V_λ[Ψ] / n^{2p-1} = V_1(α) + β V_2(α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianceLimit {
    pub power: u32,
    pub v1: Poly,
    pub v2: Poly,
    /// The exact class variance whose limit was taken.
    pub variance: RationalExpectation,
    /// Graded layers of `(n)_{2q} · V`.
    pub decomposition: GradedDecomposition,
}

impl VarianceLimit {
    pub fn text(&self) -> (String, String) {
        (self.v1.display(Naming::Limit), self.v2.display(Naming::Limit))
    }
}

pub fn variance_limit(engine: &Engine, psi: &RegularStatistic) -> Result<VarianceLimit> {
    let power = psi.power() as u32;
    let v = variance(engine, psi)?.variance;
    let top = 2 * power as i64;
    let decomposition = decompose(&v, top, 1)?;
    let fixed = decomposition.fixed_point_part(top);
    if !fixed.is_zero() {
        return Err(Error::Consistency(format!(
            "top variance layer has terms in y1 alone: {}",
            fixed.display(Naming::Scaled)
        )));
    }
    // V_1 is g_{2p-1} at y = (alpha, 0, ...), V_2 the y_2 coefficient of g_{2p}.
    let v1 = decomposition.fixed_point_part(top - 1);
    let v2 = decomposition
        .leading()
        .filter_terms(|e| e.len() == 2 && e[1] == 1)
        .substitute(1, &Poly::one());
    if !v.is_zero() {
        let lim = v.limit_ratio(2 * power as i32 - 1)?;
        let direct = &v1 + &(&v2 * &Poly::var(1));
        if lim != direct {
            return Err(Error::Consistency(format!(
                "layered variance limit {} disagrees with the direct limit {}",
                direct.display(Naming::Limit),
                lim.display(Naming::Limit)
            )));
        }
    }
    Ok(VarianceLimit {
        power,
        v1,
        v2,
        variance: v,
        decomposition,
    })
}

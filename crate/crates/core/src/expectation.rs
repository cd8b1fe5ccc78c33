//! Exact expectations of the form `numerator / Π_j (n)_{a_j}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::part_multiplicities;
use crate::error::{Error, Result};
use crate::poly::{falling_factorial, rat, Naming, Poly, PolyJson};

/// `numerator(n, m_1, …) / Π_j (n)_{denom[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpectation {
    numerator: Poly,
    denom: Vec<u32>,
}

/// `(n)_a` as a polynomial in `n`.
fn falling(a: u32) -> Poly {
    falling_factorial(0, 0, a)
}

/// Values `[n, m_1, …, m_width]` of the graded variables at `λ`.
pub fn graded_values(lambda: &[u32], width: usize) -> Vec<BigRational> {
    let n: u32 = lambda.iter().sum();
    let mult = part_multiplicities(lambda);
    let mut values = vec![rat(n as i64)];
    for i in 1..width.max(1) {
        values.push(rat(mult.get(i).copied().unwrap_or(0) as i64));
    }
    values
}

pub fn check_partition(lambda: &[u32]) -> Result<()> {
    if lambda.contains(&0) {
        return Err(Error::Malformed("partition parts must be positive".into()));
    }
    Ok(())
}

impl RationalExpectation {
    pub fn new(numerator: Poly, denom: Vec<u32>) -> Self {
        let mut e = Self { numerator, denom };
        e.normalize();
        e
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn zero() -> Self {
        Self::polynomial(Poly::zero())
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    /// Falling-factorial lengths of the denominator, largest first.
    pub fn denominator(&self) -> &[u32] {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn denominator_poly(&self) -> Poly {
        self.denom.iter().fold(Poly::one(), |acc, &a| &acc * &falling(a))
    }

    /// Sorts the factors and cancels top linear factors `n - a + 1` of each
    /// `(n)_a` that divide the numerator.
    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.denom.clear();
            return;
        }
        self.denom.retain(|&a| a > 0);
        self.denom.sort_unstable_by(|a, b| b.cmp(a));
        'outer: loop {
            for j in 0..self.denom.len() {
                let a = self.denom[j];
                if let Some(q) = self.numerator.div_linear(0, &rat(a as i64 - 1)) {
                    self.numerator = q;
                    self.denom[j] -= 1;
                    self.denom.retain(|&a| a > 0);
                    self.denom.sort_unstable_by(|a, b| b.cmp(a));
                    continue 'outer;
                }
            }
            break;
        }
    }

    fn common_denominator(a: &[u32], b: &[u32]) -> (Vec<u32>, Poly, Poly) {
        let len = a.len().max(b.len());
        let pad = |v: &[u32]| {
            let mut v = v.to_vec();
            v.resize(len, 0);
            v
        };
        let (a, b) = (pad(a), pad(b));
        let mut common = Vec::with_capacity(len);
        let mut ca = Poly::one();
        let mut cb = Poly::one();
        for (&x, &y) in a.iter().zip(&b) {
            let top = x.max(y);
            common.push(top);
            ca = &ca * &falling_factorial(0, x as i64, top - x);
            cb = &cb * &falling_factorial(0, y as i64, top - y);
        }
        (common, ca, cb)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (denom, ca, cb) = Self::common_denominator(&self.denom, &other.denom);
        let num = &(&self.numerator * &ca) + &(&other.numerator * &cb);
        Self::new(num, denom)
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: -&self.numerator,
            denom: self.denom.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut denom = self.denom.clone();
        denom.extend_from_slice(&other.denom);
        Self::new(&self.numerator * &other.numerator, denom)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.numerator.scale(c), self.denom.clone())
    }

    pub fn times_poly(&self, p: &Poly) -> Self {
        Self::new(&self.numerator * p, self.denom.clone())
    }

    /// Exact value at graded-variable values `[n, m_1, …]`.
    pub fn evaluate(&self, values: &[BigRational]) -> Result<BigRational> {
        let den = self.denominator_poly().eval(&values[..1]);
        if den.is_zero() {
            return Err(Error::DegenerateEvaluation(format!(
                "denominator {} vanishes at n = {}",
                self.denominator_text(),
                values[0]
            )));
        }
        Ok(self.numerator.eval(values) / den)
    }

    /// Exact value at the cycle type `λ`.
    pub fn evaluate_at(&self, lambda: &[u32]) -> Result<BigRational> {
        check_partition(lambda)?;
        let width = self.numerator.num_vars().max(1);
        self.evaluate(&graded_values(lambda, width))
    }

    /// The polynomial `self · (n)_len`; fails when that is not a polynomial.
    pub fn over_falling(&self, len: u32) -> Result<Poly> {
        let mut num = &self.numerator * &falling(len);
        for &a in &self.denom {
            for t in 0..a {
                num = num.div_linear(0, &rat(t as i64)).ok_or_else(|| {
                    Error::Consistency(format!(
                        "{} is not a polynomial after multiplying by (n)_{len}",
                        self
                    ))
                })?;
            }
        }
        Ok(num)
    }

    /// `lim_{n→∞} self / n^scale_power` after `m_1 = αn`, `m_2 = βn` and
    /// `m_i = 0` for `i ≥ 3`; a polynomial in `alpha, beta` ([`Naming::Limit`]).
    pub fn limit_ratio(&self, scale_power: i32) -> Result<Poly> {
        let mut num = Poly::zero();
        for (exps, c) in self.numerator.terms() {
            if exps.iter().skip(3).any(|&a| a > 0) {
                continue;
            }
            let get = |i: usize| exps.get(i).copied().unwrap_or(0);
            let (a0, a1, a2) = (get(0), get(1), get(2));
            num = &num + &Poly::monomial(vec![a0 + a1 + a2, a1, a2], c.clone());
        }
        let mut den_degree: i64 = self.denom.iter().map(|&a| a as i64).sum();
        if scale_power >= 0 {
            den_degree += scale_power as i64;
        } else {
            num = &num * &Poly::var(0).pow((-scale_power) as u32);
        }
        let coeffs = num.coefficients_in(0);
        let Some((&top, _)) = coeffs.iter().next_back() else {
            return Ok(Poly::zero());
        };
        if top as i64 > den_degree {
            return Err(Error::Divergence(format!(
                "numerator has degree {top} in n, denominator {den_degree}; raise the scale power"
            )));
        }
        // Every denominator factor is monic in n.
        Ok(coeffs
            .get(&(den_degree as u32))
            .cloned()
            .unwrap_or_default()
            .rename(|i| i - 1))
    }

    fn denominator_text(&self) -> String {
        self.denom
            .iter()
            .map(|a| format!("(n)_{a}"))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// The integer-coefficient numerator and the integer content it was
    /// scaled by.
    fn cleared(&self) -> (Poly, BigInt) {
        let l = self.numerator.denominator_lcm();
        (self.numerator.scale(&BigRational::from_integer(l.clone())), l)
    }

    pub fn to_json(&self) -> ExpectationJson {
        ExpectationJson {
            numerator: self.numerator.to_json(Naming::Graded),
            denominator: self.denom.clone(),
        }
    }

    pub fn from_json(json: &ExpectationJson) -> Result<Self> {
        Ok(Self::new(
            Poly::from_json(&json.numerator, Naming::Graded)?,
            json.denominator.clone(),
        ))
    }
}

impl fmt::Display for RationalExpectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, content) = self.cleared();
        let mut den_parts = Vec::new();
        if !content.is_one() {
            den_parts.push(content.to_string());
        }
        den_parts.extend(self.denom.iter().map(|a| format!("(n)_{a}")));
        let num_text = num.to_string();
        if den_parts.is_empty() {
            return f.write_str(&num_text);
        }
        let num_text = if num.num_terms() > 1 {
            format!("({num_text})")
        } else {
            num_text
        };
        if den_parts.len() == 1 {
            write!(f, "{num_text} / {}", den_parts[0])
        } else {
            write!(f, "{num_text} / ({})", den_parts.join("*"))
        }
    }
}

/// JSON form `{numerator: <poly>, denominator: [a_1, a_2, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationJson {
    pub numerator: PolyJson,
    pub denominator: Vec<u32>,
}

/// An expectation split by the support size of the contributing indicators.
///
/// A layer with support `m` vanishes identically when `n < m`, even where its
/// closed form is `0/0`; evaluation skips such layers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpectationBySupport {
    layers: BTreeMap<u32, RationalExpectation>,
}

impl ExpectationBySupport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_layer(&mut self, support: u32, e: &RationalExpectation) {
        let slot = self.layers.entry(support).or_insert_with(RationalExpectation::zero);
        *slot = slot.add(e);
        if slot.is_zero() {
            self.layers.remove(&support);
        }
    }

    pub fn layers(&self) -> &BTreeMap<u32, RationalExpectation> {
        &self.layers
    }

    pub fn total(&self) -> RationalExpectation {
        self.layers
            .values()
            .fold(RationalExpectation::zero(), |acc, e| acc.add(e))
    }

    pub fn evaluate_at(&self, lambda: &[u32]) -> Result<BigRational> {
        check_partition(lambda)?;
        let n: u32 = lambda.iter().sum();
        let mut total = BigRational::zero();
        for (&support, e) in &self.layers {
            if support <= n {
                total += e.evaluate_at(lambda)?;
            }
        }
        Ok(total)
    }

    /// Value of a univariate (uniform-measure) expectation at `n`.
    pub fn evaluate_uniform(&self, n: u32) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (&support, e) in &self.layers {
            if support <= n {
                let v = e.evaluate(&[rat(n as i64)])?;
                total += v;
            }
        }
        Ok(total)
    }
}

//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are addressed by index. How an index is printed (and how it is
//! weighted when ordering output) is decided by a [`Naming`]; the moment
//! polynomials use [`Naming::Graded`], where index 0 is `n` and index `i ≥ 1`
//! is `m_i` with weight `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector with trailing zeros trimmed.
pub type Monomial = Vec<u32>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Prints `p/q`, or `p` for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Malformed(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// How variable indices are named and weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Naming {
    /// `n, m1, m2, …` with `deg n = 1`, `deg m_i = i`.
    Graded,
    /// `x1, x2, …`, all of weight one.
    Weights,
    /// `y1, y2, …` (scaled cycle counts `m_i / n^i`), `deg y_i = i`.
    Scaled,
    /// `alpha, beta`.
    Limit,
    /// `n, alpha, beta`.
    LimitWithN,
}

impl Naming {
    pub fn name(self, var: usize) -> String {
        match self {
            Naming::Graded => match var {
                0 => "n".into(),
                i => format!("m{i}"),
            },
            Naming::Weights => format!("x{}", var + 1),
            Naming::Scaled => format!("y{}", var + 1),
            Naming::Limit => ["alpha", "beta"].get(var).map_or_else(|| format!("v{var}"), |s| s.to_string()),
            Naming::LimitWithN => ["n", "alpha", "beta"]
                .get(var)
                .map_or_else(|| format!("v{var}"), |s| s.to_string()),
        }
    }

    pub fn weight(self, var: usize) -> u32 {
        match self {
            Naming::Graded => var.max(1) as u32,
            Naming::Scaled => var as u32 + 1,
            _ => 1,
        }
    }

    pub fn parse_name(self, name: &str) -> Option<usize> {
        match self {
            Naming::Graded => match name {
                "n" => Some(0),
                _ => name.strip_prefix('m')?.parse().ok().filter(|&i: &usize| i >= 1),
            },
            Naming::Weights => name.strip_prefix('x')?.parse::<usize>().ok()?.checked_sub(1),
            Naming::Scaled => name.strip_prefix('y')?.parse::<usize>().ok()?.checked_sub(1),
            Naming::Limit => ["alpha", "beta"].iter().position(|s| *s == name),
            Naming::LimitWithN => ["n", "alpha", "beta"].iter().position(|s| *s == name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

/// Graded moment polynomial in `n, m_1, m_2, …`.
pub type GradedPolynomial = Poly;

fn trim(mut exps: Monomial) -> Monomial {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

fn mul_monomials(a: &[u32], b: &[u32]) -> Monomial {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Self::monomial(exps, BigRational::one())
    }

    pub fn monomial(exps: Monomial, coef: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(trim(exps), coef);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (exps, c) in terms {
            p.add_term(trim(exps), c);
        }
        p
    }

    fn add_term(&mut self, exps: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// One past the largest variable index in use.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.num_vars() == 0
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&[])
    }

    /// Ordinary total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree with `deg n = 1`, `deg m_i = i`; `None` (−∞) for zero.
    pub fn graded_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| graded_degree_of(e)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.get(var).copied().unwrap_or(0))
            .max()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates with `values[i]` for variable `i`. Variables beyond the slice
    /// must not occur.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let v = values
                        .get(i)
                        .unwrap_or_else(|| panic!("no value supplied for variable {i}"));
                    term *= num_traits::pow(v.clone(), e as usize);
                }
            }
            total += term;
        }
        total
    }

    pub fn eval_int(&self, values: &[i64]) -> BigRational {
        let vals: Vec<BigRational> = values.iter().map(|&v| rat(v)).collect();
        self.eval(&vals)
    }

    /// Replaces variable `var` by `value`.
    pub fn substitute(&self, var: usize, value: &Poly) -> Poly {
        let mut powers = vec![Poly::one()];
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let e = exps.get(var).copied().unwrap_or(0) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = exps.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            let rest = Poly::monomial(rest, c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Renames variable `i` to `map(i)`; exponents of variables sent to the
    /// same index add up.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let mut new = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map(i);
                if new.len() <= j {
                    new.resize(j + 1, 0);
                }
                new[j] += e;
            }
            out.add_term(trim(new), c.clone());
        }
        out
    }

    /// Coefficients with respect to `var`, as polynomials not involving it.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (exps, c) in &self.terms {
            let e = exps.get(var).copied().unwrap_or(0);
            let mut rest = exps.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            out.entry(e).or_default().add_term(trim(rest), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Exact quotient by `(x_var - root)`, or `None` if it does not divide.
    pub fn div_linear(&self, var: usize, root: &BigRational) -> Option<Poly> {
        let coeffs = self.coefficients_in(var);
        let Some((&top, _)) = coeffs.iter().next_back() else {
            return Some(Poly::zero());
        };
        // Synthetic division, highest power first.
        let mut quotient = Poly::zero();
        let mut carry = Poly::zero();
        for e in (0..=top).rev() {
            let current = &coeffs.get(&e).cloned().unwrap_or_default() + &carry;
            if e == 0 {
                return current.is_zero().then_some(quotient);
            }
            let mut shift = vec![0; var + 1];
            shift[var] = e - 1;
            quotient = &quotient + &(&current * &Poly::monomial(shift, BigRational::one()));
            carry = current.scale(root);
        }
        unreachable!()
    }

    /// Keeps only the monomials accepted by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[u32]) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Text form: monomials ordered by weighted degree, then by exponent
    /// vector in decreasing lexicographic order.
    pub fn display(&self, naming: Naming) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (exps, c)) in self.sorted_terms(naming).into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = monomial_text(exps, naming);
            match (abs.is_one(), mono.is_empty()) {
                (_, true) => out.push_str(&fmt_rational(&abs)),
                (true, false) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&fmt_rational(&abs));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    fn sorted_terms(&self, naming: Naming) -> Vec<(&Monomial, &BigRational)> {
        let weight = |e: &Monomial| -> u32 {
            e.iter()
                .enumerate()
                .map(|(i, &a)| a * naming.weight(i))
                .sum()
        };
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            weight(a).cmp(&weight(b)).then_with(|| {
                let len = a.len().max(b.len());
                let pad = |e: &Monomial| {
                    let mut v = e.clone();
                    v.resize(len, 0);
                    v
                };
                pad(b).cmp(&pad(a))
            })
        });
        terms
    }

    pub fn to_json(&self, naming: Naming) -> PolyJson {
        PolyJson {
            terms: self
                .sorted_terms(naming)
                .into_iter()
                .map(|(exps, c)| TermJson {
                    coef: fmt_rational(c),
                    exps: exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| a > 0)
                        .map(|(i, &a)| (naming.name(i), a))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson, naming: Naming) -> Result<Poly> {
        let mut out = Poly::zero();
        for term in &json.terms {
            let coef = parse_rational(&term.coef)?;
            let mut exps = Vec::new();
            for (name, &a) in &term.exps {
                let i = naming
                    .parse_name(name)
                    .ok_or_else(|| Error::Malformed(format!("unknown variable `{name}`")))?;
                if exps.len() <= i {
                    exps.resize(i + 1, 0);
                }
                exps[i] += a;
            }
            out.add_term(trim(exps), coef);
        }
        Ok(out)
    }
}

pub fn graded_degree_of(exps: &[u32]) -> u32 {
    exps.iter()
        .enumerate()
        .map(|(i, &a)| a * (i.max(1) as u32))
        .sum()
}

fn monomial_text(exps: &[u32], naming: Naming) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| {
            if a == 1 {
                naming.name(i)
            } else {
                format!("{}^{}", naming.name(i), a)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(Naming::Graded))
    }
}

/// JSON form `{terms: [{coef: "p/q", exps: {n: a0, m1: a1, …}}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exps: BTreeMap<String, u32>,
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(mul_monomials(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `(x - shift)(x - shift - 1)⋯(x - shift - len + 1)` in variable `var`.
pub fn falling_factorial(var: usize, shift: i64, len: u32) -> Poly {
    let x = Poly::var(var);
    (0..len as i64).fold(Poly::one(), |acc, t| &acc * &(&x - &Poly::int(shift + t)))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Univariate polynomial in variable 0 through the points
/// `(start + j, values[j])`, via Newton forward differences.
pub fn interpolate(start: i64, values: &[BigRational]) -> Poly {
    let mut diffs = values.to_vec();
    let mut out = Poly::zero();
    for j in 0..values.len() {
        let lead = diffs[0].clone();
        if !lead.is_zero() {
            let binom = falling_factorial(0, start, j as u32)
                .scale(&BigRational::from_integer(factorial(j as u32)).recip());
            out = &out + &binom.scale(&lead);
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Calls `f` on each increasing `k`-tuple drawn from `1..=n`.
pub fn for_each_subset(n: u32, k: usize, mut f: impl FnMut(&[u32])) {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = (k - cur.len()) as u32;
        let mut x = start;
        while x + need - 1 <= n {
            cur.push(x);
            go(x + 1, n, k, cur, f);
            cur.pop();
            x += 1;
        }
    }
    go(1, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Calls `f` on every `width`-subset `i_1 < … < i_width` of `1..=n` with
/// `i_{c+1} = i_c + 1` for each `c` in `constraints`.
pub fn for_each_constrained_subset(n: u32, width: usize, constraints: &[u32], mut f: impl FnMut(&[u32])) {
    let q = constraints.len();
    if width == 0 {
        f(&[]);
        return;
    }
    if (n as usize) < width {
        return;
    }
    let free = width - q;
    let mut full = vec![0u32; width];
    for_each_subset(n - q as u32, free, |shifted| {
        let mut next_free = 0;
        let mut offset = 0u32;
        for j in 1..=width {
            if j > 1 && constraints.contains(&(j as u32 - 1)) {
                full[j - 1] = full[j - 2] + 1;
                offset += 1;
            } else {
                full[j - 1] = shifted[next_free] + offset;
                next_free += 1;
            }
        }
        f(&full);
    });
}

/// A constrained power sum and its reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedSum {
    /// `S(n) = Σ f(i_1, …, i_width)` over constrained subsets of `[n]`.
    pub sum: Poly,
    /// `S(n) = fbar(n) · binom(n - q, width - q)`.
    pub reduced: Poly,
}

/// Closed form of `Σ f(i_1, …, i_width)` over `C`-constrained subsets of
/// `[n]`, as a polynomial in `n` (variable 0), valid for `n ≥ q`.
///
/// The sum has degree at most `deg f + width - q`; it is sampled at that many
/// plus one points and interpolated exactly, then divided by
/// `binom(n - q, width - q)`.
pub fn constrained_sum(f: &Poly, width: usize, constraints: &[u32]) -> Result<ConstrainedSum> {
    let q = constraints.len();
    if constraints
        .iter()
        .any(|&c| c == 0 || c as usize >= width.max(1))
    {
        return Err(Error::Malformed(format!(
            "constraint set must lie in [1, {}]",
            width.saturating_sub(1)
        )));
    }
    if f.num_vars() > width {
        return Err(Error::Malformed(format!(
            "weight uses x{} but only {width} indices are summed",
            f.num_vars()
        )));
    }
    if f.is_zero() {
        return Ok(ConstrainedSum {
            sum: Poly::zero(),
            reduced: Poly::zero(),
        });
    }
    let deg = f.total_degree().unwrap_or(0) as usize;
    // Below n = q the enumerated sum is 0 but the polynomial need not be.
    let points = deg + width - q + 1;
    let values: Vec<BigRational> = (q..q + points)
        .map(|n| direct_constrained_sum(f, width, constraints, n as u32))
        .collect();
    let sum = interpolate(q as i64, &values);

    let mut reduced = sum.clone();
    for t in 0..(width - q) {
        reduced = reduced
            .div_linear(0, &rat((q + t) as i64))
            .ok_or_else(|| {
                Error::Consistency(format!(
                    "constrained sum {} is not divisible by binom(n - {q}, {})",
                    sum,
                    width - q
                ))
            })?;
    }
    let reduced = reduced.scale(&BigRational::from_integer(factorial((width - q) as u32)));
    if reduced.total_degree() > f.total_degree() {
        return Err(Error::Consistency(format!(
            "reduced constrained sum {reduced} exceeds the weight degree"
        )));
    }
    Ok(ConstrainedSum { sum, reduced })
}

/// The constrained sum at a single `n`, by enumeration.
pub fn direct_constrained_sum(f: &Poly, width: usize, constraints: &[u32], n: u32) -> BigRational {
    let mut total = BigRational::zero();
    let mut args = Vec::with_capacity(width);
    for_each_constrained_subset(n, width, constraints, |subset| {
        args.clear();
        args.extend(subset.iter().map(|&x| rat(x as i64)));
        total += f.eval(&args);
    });
    total
}

/// Converts to `i64` when exact and in range.
pub fn to_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.numer().to_i64()).flatten()
}

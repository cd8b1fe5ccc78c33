//! Text syntax for statistics.
//!
//! ```text
//! stat      := term (("+" | "-") term)*
//! term      := factor ("*" factor)*
//! factor    := "-" factor | atom ("^" int)?
//! atom      := rational | builtin | translate | "(" stat ")"
//! builtin   := "exc" | "des" | "maj" | "inv" | "fix" | "cyc2"
//!            | "N(" word (";A=" intset)? ")"
//!            | "biv(" word (";A=" intset)? (";B=" intset)? (";f=" poly)? (";g=" poly)? ")"
//! translate := "T(U=" inttuple ";V=" inttuple (";C=" intset)? (";f=" poly)? ")"
//! poly      := polynomial in x1, x2, … with rational coefficients and + - * ^
//! ```
//!
//! A word is a string of digits such as `132`, or a comma list for patterns
//! longer than nine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::PartialPermutation;
use crate::error::{Error, Result};
use crate::poly::Poly;

use super::bivincular::BivincularPattern;
use super::builtins::builtin;
use super::translate::{ConstrainedTranslate, RegularStatistic};

pub fn parse_statistic(src: &str) -> Result<RegularStatistic> {
    let mut p = Parser::new(src);
    let stat = p.stat()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("end of input or an operator"));
    }
    Ok(stat)
}

/// Parses a weight polynomial in `x1, x2, …`.
pub fn parse_weight(src: &str) -> Result<Poly> {
    let mut p = Parser::new(src);
    let poly = p.poly()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("end of polynomial"));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        let d = self.digits().ok_or_else(|| self.error("an integer"))?;
        d.parse().map_err(|_| {
            self.pos = start;
            self.error("an integer that fits in 32 bits")
        })
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num: BigInt = self.digits().ok_or_else(|| self.error("a number"))?.parse().expect("digits");
        let save = self.pos;
        if self.eat('/') {
            match self.digits() {
                Some(d) => {
                    let den: BigInt = d.parse().expect("digits");
                    if den.is_zero() {
                        return Err(self.error("a nonzero denominator"));
                    }
                    return Ok(BigRational::new(num, den));
                }
                None => self.pos = save,
            }
        }
        Ok(BigRational::from_integer(num))
    }

    fn stat(&mut self) -> Result<RegularStatistic> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.scale(&BigRational::from_integer((-1).into())));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RegularStatistic> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RegularStatistic> {
        if self.eat('-') {
            return Ok(self.factor()?.scale(&BigRational::from_integer((-1).into())));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let d = self.uint()?;
            return Ok(base.pow(d));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RegularStatistic> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let s = self.stat()?;
                self.expect(')')?;
                Ok(s)
            }
            Some(c) if c.is_ascii_digit() => Ok(RegularStatistic::constant(self.rational()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "T" => self.translate(),
                    "N" => self.vincular(),
                    "biv" => self.bivincular(),
                    _ => builtin(&name).map_err(|e| match e {
                        Error::UnknownBuiltin(_) => Error::Parse {
                            position: start,
                            expected: format!(
                                "a statistic (exc, des, maj, inv, fix, cyc2, N(..), biv(..), T(..)), found `{name}`"
                            ),
                        },
                        other => other,
                    }),
                }
            }
            _ => Err(self.error("a statistic")),
        }
    }

    fn word(&mut self) -> Result<Vec<u32>> {
        let first = self.digits().ok_or_else(|| self.error("a pattern such as 132"))?;
        if self.peek() == Some(',') {
            let mut out = vec![first.parse().map_err(|_| self.error("a pattern entry"))?];
            while self.eat(',') {
                out.push(self.uint()?);
            }
            Ok(out)
        } else {
            Ok(first.chars().map(|c| c.to_digit(10).expect("digit")).collect())
        }
    }

    fn int_set(&mut self) -> Result<Vec<u32>> {
        self.expect('{')?;
        let mut out = Vec::new();
        if self.eat('}') {
            return Ok(out);
        }
        loop {
            out.push(self.uint()?);
            if self.eat('}') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn int_tuple(&mut self) -> Result<Vec<u32>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.uint()?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `key=` inside a parenthesized field list.
    fn field_key(&mut self, allowed: &[&str]) -> Result<String> {
        let start = self.pos;
        let key = self.ident();
        if !allowed.contains(&key.as_str()) {
            self.pos = start;
            return Err(self.error(&format!("one of the fields {}", allowed.join(", "))));
        }
        self.expect('=')?;
        Ok(key)
    }

    fn vincular(&mut self) -> Result<RegularStatistic> {
        self.expect('(')?;
        let start = self.pos;
        let sigma = self.word()?;
        let mut a = Vec::new();
        while self.eat(';') {
            self.field_key(&["A"])?;
            a = self.int_set()?;
        }
        self.expect(')')?;
        let pattern = BivincularPattern::vincular(sigma, a).map_err(|e| self.located(start, e))?;
        Ok(pattern.compile())
    }

    fn bivincular(&mut self) -> Result<RegularStatistic> {
        self.expect('(')?;
        let start = self.pos;
        let sigma = self.word()?;
        let (mut a, mut b, mut f, mut g) = (Vec::new(), Vec::new(), Poly::one(), Poly::one());
        while self.eat(';') {
            match self.field_key(&["A", "B", "f", "g"])?.as_str() {
                "A" => a = self.int_set()?,
                "B" => b = self.int_set()?,
                "f" => f = self.poly()?,
                _ => g = self.poly()?,
            }
        }
        self.expect(')')?;
        let pattern = BivincularPattern::new(sigma, a, b, f, g).map_err(|e| self.located(start, e))?;
        Ok(pattern.compile())
    }

    fn translate(&mut self) -> Result<RegularStatistic> {
        self.expect('(')?;
        let start = self.pos;
        let (mut u, mut v, mut c, mut f) = (None, None, Vec::new(), Poly::one());
        loop {
            match self.field_key(&["U", "V", "C", "f"])?.as_str() {
                "U" => u = Some(self.int_tuple()?),
                "V" => v = Some(self.int_tuple()?),
                "C" => c = self.int_set()?,
                _ => f = self.poly()?,
            }
            if !self.eat(';') {
                break;
            }
        }
        self.expect(')')?;
        let (Some(u), Some(v)) = (u, v) else {
            return Err(Error::Parse {
                position: start,
                expected: "both U= and V= in a translate".into(),
            });
        };
        if f.is_zero() {
            return Ok(RegularStatistic::zero());
        }
        let t = PartialPermutation::new(u, v)
            .and_then(|p| ConstrainedTranslate::new(p, c, f))
            .map_err(|e| self.located(start, e))?;
        Ok(RegularStatistic::from_translate(t))
    }

    fn located(&self, position: usize, e: Error) -> Error {
        Error::Parse {
            position,
            expected: format!("a valid shape ({e})"),
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = self.poly_term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.poly_term()?;
            } else if self.eat('-') {
                acc = &acc - &self.poly_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_term(&mut self) -> Result<Poly> {
        let mut acc = self.poly_factor()?;
        while self.eat('*') {
            acc = &acc * &self.poly_factor()?;
        }
        Ok(acc)
    }

    fn poly_factor(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-self.poly_factor()?);
        }
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(')')?;
                p
            }
            Some('x') => {
                self.pos += 1;
                let i = self.uint()?;
                if i == 0 {
                    return Err(self.error("a variable index of at least 1"));
                }
                Poly::var(i as usize - 1)
            }
            Some(c) if c.is_ascii_digit() => Poly::constant(self.rational()?),
            _ => return Err(self.error("a number, x<i> or `(`")),
        };
        if self.eat('^') {
            return Ok(base.pow(self.uint()?));
        }
        Ok(base)
    }
}

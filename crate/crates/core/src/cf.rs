//! Simple continued fractions given by exact partial quotients.
//!
//! A [`CfSpec`] is a finite prefix `a_0, a_1, …` optionally followed by a
//! repeating period. The textual form is `[a0;a1,a2,(b1,b2)]`; the period sits
//! in parentheses at the end and whitespace is ignored on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CfSpec {
    prefix: Vec<u64>,
    period: Vec<u64>,
}

impl CfSpec {
    /// `prefix` must hold at least `a_0`; every quotient must be positive.
    pub fn new(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::EmptySpec);
        }
        if let Some(index) = prefix.iter().chain(&period).position(|&a| a == 0) {
            return Err(Error::NonPositiveQuotient { index });
        }
        Ok(CfSpec { prefix, period })
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// A nonempty period makes the value a quadratic irrational.
    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of available quotients, `None` when the period repeats forever.
    pub fn quotient_count(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.prefix.len())
        }
    }

    pub fn quotient_at(&self, n: usize) -> Result<u64> {
        if let Some(&a) = self.prefix.get(n) {
            return Ok(a);
        }
        if self.period.is_empty() {
            return Err(Error::QuotientsExhausted { index: n });
        }
        Ok(self.period[(n - self.prefix.len()) % self.period.len()])
    }

    /// `p_n, q_n` for any `n ≥ -2`, seeds included.
    pub fn convergent(&self, n: i64) -> Result<Convergent> {
        if n < -2 {
            return Err(Error::InvalidArgument(format!("convergent index {n} < -2")));
        }
        let mut iter = self.convergent_iter();
        let [seed_2, seed_1] = Convergent::seeds();
        match n {
            -2 => Ok(seed_2),
            -1 => Ok(seed_1),
            _ => {
                for _ in 0..n {
                    iter.next().transpose()?;
                }
                iter.next()
                    .unwrap_or(Err(Error::QuotientsExhausted { index: n as usize }))
            }
        }
    }

    /// Convergents `n = 0 ..= upto`.
    pub fn convergents(&self, upto: usize) -> Result<Vec<Convergent>> {
        let mut out = Vec::with_capacity(upto + 1);
        for item in self.convergent_iter() {
            let c = item?;
            let done = c.n as usize == upto;
            out.push(c);
            if done {
                return Ok(out);
            }
        }
        Err(Error::QuotientsExhausted { index: out.len() })
    }

    /// Convergents from `n = 0`, ending after the last quotient of a finite spec.
    pub fn convergent_iter(&self) -> ConvergentIter<'_> {
        ConvergentIter {
            cf: self,
            n: 0,
            prev: (BigInt::zero(), BigInt::one()),
            cur: (BigInt::one(), BigInt::zero()),
        }
    }

    /// Rewrites `α ≥ 2` as its dual `α/(α-1) ∈ (1, 2)`. The flag reports
    /// whether the two parts of the partition trade labels.
    pub fn normalize_to_unit_interval(&self) -> (CfSpec, bool) {
        let a0 = self.prefix[0];
        if a0 == 1 {
            return (self.clone(), false);
        }
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(1);
        prefix.push(a0 - 1);
        prefix.extend_from_slice(&self.prefix[1..]);
        (
            CfSpec {
                prefix,
                period: self.period.clone(),
            },
            true,
        )
    }

    /// The inverse direction: `[1, a_1, a_2, …] ↦ [a_1 + 1, a_2, …]`.
    pub fn dual_of_unit(&self) -> Result<CfSpec> {
        if self.prefix[0] != 1 {
            return Err(Error::InvalidArgument(format!(
                "dual map needs a_0 = 1, got {}",
                self.prefix[0]
            )));
        }
        if self.prefix.len() >= 2 {
            let mut prefix = vec![self.prefix[1] + 1];
            prefix.extend_from_slice(&self.prefix[2..]);
            return Ok(CfSpec {
                prefix,
                period: self.period.clone(),
            });
        }
        if self.period.is_empty() {
            return Err(Error::QuotientsExhausted { index: 1 });
        }
        let mut period = self.period[1..].to_vec();
        period.push(self.period[0]);
        Ok(CfSpec {
            prefix: vec![self.period[0] + 1],
            period,
        })
    }

    /// Numerators `p_n + k·p_{n+1}` for `1 ≤ k < a_{n+2}`.
    pub fn intermediate_numerators(&self, n: i64) -> Result<Vec<IntermediateNumerator>> {
        if n < -2 {
            return Err(Error::InvalidArgument(format!("index {n} < -2")));
        }
        let a = self.quotient_at((n + 2) as usize)?;
        let base = self.convergent(n)?.p;
        let step = self.convergent(n + 1)?.p;
        Ok((1..a)
            .map(|k| IntermediateNumerator {
                n,
                k,
                value: &base + &step * k,
            })
            .collect())
    }

    /// Whether some quotient equal to 1 recurs forever.
    pub fn tail_has_infinitely_many_ones(&self) -> Result<bool> {
        if self.period.is_empty() {
            return Err(Error::Undecidable);
        }
        Ok(self.period.contains(&1))
    }

    /// First index `m ≥ 1` from which every quotient is at least 2, if any.
    pub(crate) fn tail_without_ones_from(&self) -> Option<usize> {
        if self.period.is_empty() || self.period.contains(&1) {
            return None;
        }
        let last_one = self.prefix.iter().rposition(|&a| a == 1).unwrap_or(0);
        Some(last_one + 1)
    }
}

impl fmt::Display for CfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.prefix[0])?;
        let rest = &self.prefix[1..];
        if !rest.is_empty() || !self.period.is_empty() {
            f.write_str(";")?;
        }
        let mut first = true;
        for a in rest {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if !self.period.is_empty() {
            if !first {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (i, b) in self.period.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{b}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

impl FromStr for CfSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_cf(s)
    }
}

pub fn format_cf(cf: &CfSpec) -> String {
    cf.to_string()
}

pub fn parse_cf(text: &str) -> Result<CfSpec> {
    Parser::new(text).parse()
}

struct Parser {
    tokens: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let tokens: Vec<_> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser {
            tokens,
            pos: 0,
            len: text.len(),
        }
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self, index: usize) -> Result<u64> {
        let negative = self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a partial quotient");
        }
        let digits: String = self.tokens[start..self.pos].iter().map(|t| t.1).collect();
        if negative {
            return Err(Error::NonPositiveQuotient { index });
        }
        let value: u64 = match digits.parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("partial quotient does not fit in 64 bits");
            }
        };
        if value == 0 {
            return Err(Error::NonPositiveQuotient { index });
        }
        Ok(value)
    }

    fn parse(mut self) -> Result<CfSpec> {
        if self.tokens.is_empty() {
            return Err(Error::EmptySpec);
        }
        self.expect('[')?;
        if self.peek() == Some(']') {
            return Err(Error::EmptySpec);
        }
        let mut prefix = vec![self.number(0)?];
        let mut period = Vec::new();
        if self.peek() == Some(';') {
            self.pos += 1;
            let mut first = true;
            while self.peek() != Some(']') {
                if !first {
                    self.expect(',')?;
                }
                first = false;
                if self.peek() == Some('(') {
                    self.pos += 1;
                    loop {
                        let index = prefix.len() + period.len();
                        period.push(self.number(index)?);
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(')') => break,
                            _ => return self.err("expected ',' or ')'"),
                        }
                    }
                    self.pos += 1;
                    if self.peek() != Some(']') {
                        return self.err("the period must close the expansion");
                    }
                } else {
                    let index = prefix.len();
                    prefix.push(self.number(index)?);
                }
            }
        }
        self.expect(']')?;
        if self.pos != self.tokens.len() {
            return self.err("trailing input");
        }
        CfSpec::new(prefix, period)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: i64,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    /// `(p_{-2}, q_{-2}) = (0, 1)` and `(p_{-1}, q_{-1}) = (1, 0)`.
    pub fn seeds() -> [Convergent; 2] {
        [
            Convergent {
                n: -2,
                p: BigInt::zero(),
                q: BigInt::one(),
            },
            Convergent {
                n: -1,
                p: BigInt::one(),
                q: BigInt::zero(),
            },
        ]
    }
}

impl Serialize for Convergent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Convergent", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("p", &self.p.to_string())?;
        s.serialize_field("q", &self.q.to_string())?;
        s.end()
    }
}

pub struct ConvergentIter<'a> {
    cf: &'a CfSpec,
    n: usize,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl Iterator for ConvergentIter<'_> {
    type Item = Result<Convergent>;

    fn next(&mut self) -> Option<Self::Item> {
        let a = match self.cf.quotient_at(self.n) {
            Ok(a) => BigInt::from(a),
            Err(_) => return None,
        };
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        let next = (p.clone(), q.clone());
        self.prev = std::mem::replace(&mut self.cur, next);
        let c = Convergent {
            n: self.n as i64,
            p,
            q,
        };
        self.n += 1;
        Some(Ok(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateNumerator {
    pub n: i64,
    pub k: u64,
    pub value: BigInt,
}

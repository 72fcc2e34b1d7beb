//! Exact decisions about the error `E(x) = x - qα`, where `qα` is the integer
//! multiple of `α` nearest to `x`.
//!
//! Every quantity the crate compares is an integer linear form `a + bα`. Its
//! sign is read off two consecutive convergents: `α` lies strictly between
//! `p_d/q_d` and `p_{d+1}/q_{d+1}`, so once `a·q + b·p` has the same nonzero
//! sign at both ends the sign at `α` is settled. Irrationality of `α` rules out
//! `a + bα = 0` for `(a, b) ≠ 0`, so the search always ends for periodic specs.

use std::cmp::Ordering;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cf::{CfSpec, Convergent};
use crate::error::{Error, Result};

/// Quotients the engine may consume before giving up.
pub const DEFAULT_DEPTH_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorSign {
    Negative,
    Positive,
}

impl ErrorSign {
    fn from_ordering(o: Ordering) -> Option<Self> {
        match o {
            Ordering::Less => Some(ErrorSign::Negative),
            Ordering::Greater => Some(ErrorSign::Positive),
            Ordering::Equal => None,
        }
    }

    fn unit(self) -> BigInt {
        match self {
            ErrorSign::Negative => -BigInt::one(),
            ErrorSign::Positive => BigInt::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDecision {
    pub x: BigInt,
    pub sign: ErrorSign,
    pub depth_used: usize,
}

/// `E(x)` held exactly as `x - qα` together with its sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorValue {
    pub x: BigInt,
    pub q: BigInt,
    pub sign: ErrorSign,
}

/// Rational bounds `lo ≤ E(x) ≤ hi` read from a pair of convergents. The bounds
/// coincide only when `q = 0`, where `E(x) = x` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorInterval {
    pub x: BigInt,
    pub q: BigInt,
    pub lo: BigRational,
    pub hi: BigRational,
    pub depth: usize,
}

impl ErrorInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lo <= value && value <= &self.hi
    }
}

/// An irrational `α` given by its continued fraction, with a shared cache of
/// convergents.
#[derive(Debug)]
pub struct Alpha {
    cf: CfSpec,
    depth_cap: usize,
    table: RwLock<Vec<(BigInt, BigInt)>>,
}

impl Clone for Alpha {
    fn clone(&self) -> Self {
        Alpha {
            cf: self.cf.clone(),
            depth_cap: self.depth_cap,
            table: RwLock::new(self.table.read().unwrap().clone()),
        }
    }
}

impl Alpha {
    pub fn new(cf: CfSpec) -> Self {
        Self::with_depth_cap(cf, DEFAULT_DEPTH_CAP)
    }

    pub fn with_depth_cap(cf: CfSpec, depth_cap: usize) -> Self {
        Alpha {
            cf,
            depth_cap: depth_cap.max(2),
            table: RwLock::new(Vec::new()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(text.parse()?))
    }

    pub fn cf(&self) -> &CfSpec {
        &self.cf
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// The dual in `(1, 2)` with the same depth cap, and the label-swap flag.
    pub fn normalized(&self) -> (Alpha, bool) {
        let (cf, swapped) = self.cf.normalize_to_unit_interval();
        if !swapped {
            return (self.clone(), false);
        }
        (Alpha::with_depth_cap(cf, self.depth_cap), true)
    }

    pub fn quotient(&self, n: usize) -> Result<u64> {
        self.cf.quotient_at(n)
    }

    /// `p_n` and `q_n` for `n ≥ -2`.
    pub fn convergent(&self, n: i64) -> Result<Convergent> {
        if n < 0 {
            return self.cf.convergent(n);
        }
        let idx = n as usize;
        self.ensure(idx)?;
        let table = self.table.read().unwrap();
        let (p, q) = table[idx].clone();
        Ok(Convergent { n, p, q })
    }

    pub fn numerator(&self, n: i64) -> Result<BigInt> {
        Ok(self.convergent(n)?.p)
    }

    fn ensure(&self, idx: usize) -> Result<()> {
        if self.table.read().unwrap().len() > idx {
            return Ok(());
        }
        let mut table = self.table.write().unwrap();
        while table.len() <= idx {
            let n = table.len();
            let a = BigInt::from(self.cf.quotient_at(n)?);
            if n >= self.depth_cap {
                return Err(Error::ResolutionExceeded {
                    cap: self.depth_cap,
                });
            }
            let (p1, q1, p2, q2) = match n {
                0 => (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()),
                1 => (
                    table[0].0.clone(),
                    table[0].1.clone(),
                    BigInt::one(),
                    BigInt::zero(),
                ),
                _ => (
                    table[n - 1].0.clone(),
                    table[n - 1].1.clone(),
                    table[n - 2].0.clone(),
                    table[n - 2].1.clone(),
                ),
            };
            table.push((&a * p1 + p2, &a * q1 + q2));
        }
        Ok(())
    }

    /// Largest `d` such that the bracket `(d, d + 1)` may be formed.
    fn max_bracket(&self) -> Result<usize> {
        let avail = match self.cf.quotient_count() {
            Some(len) => len.min(self.depth_cap),
            None => self.depth_cap,
        };
        if avail < 2 {
            return Err(self.out_of_depth());
        }
        Ok(avail - 2)
    }

    fn out_of_depth(&self) -> Error {
        match self.cf.quotient_count() {
            Some(len) if len <= self.depth_cap => Error::QuotientsExhausted { index: len },
            _ => Error::ResolutionExceeded {
                cap: self.depth_cap,
            },
        }
    }

    /// Smallest `d` with `q_d ≥ bound`, clamped to the usable range.
    fn depth_for(&self, bound: &BigInt) -> Result<usize> {
        let limit = self.max_bracket()?;
        let mut want = 8usize.min(limit);
        loop {
            self.ensure(want + 1)?;
            {
                let table = self.table.read().unwrap();
                let found = table[..=want].partition_point(|(_, q)| q < bound);
                if found <= want {
                    return Ok(found);
                }
            }
            if want == limit {
                return Ok(limit);
            }
            want = (want * 2).min(limit);
        }
    }

    fn decide_at(&self, d: usize, a: &BigInt, b: &BigInt) -> Result<Option<Ordering>> {
        self.ensure(d + 1)?;
        let table = self.table.read().unwrap();
        let (p0, q0) = &table[d];
        let (p1, q1) = &table[d + 1];
        let s0 = (a * q0 + b * p0).sign();
        let s1 = (a * q1 + b * p1).sign();
        if s0 == s1 && s0 != num_bigint::Sign::NoSign {
            Ok(Some(if s0 == num_bigint::Sign::Plus {
                Ordering::Greater
            } else {
                Ordering::Less
            }))
        } else {
            Ok(None)
        }
    }

    /// Sign of `a + bα` and the number of quotients consumed.
    pub fn sign_of_linear(&self, a: &BigInt, b: &BigInt) -> Result<(Ordering, usize)> {
        if b.is_zero() {
            return Ok((a.cmp(&BigInt::zero()), 0));
        }
        if a.is_zero() {
            return Ok((b.cmp(&BigInt::zero()), 0));
        }
        let limit = self.max_bracket()?;
        let mut d = self.depth_for(&b.abs())?;
        loop {
            if let Some(ord) = self.decide_at(d, a, b)? {
                return Ok((ord, d + 2));
            }
            if d >= limit {
                return Err(self.out_of_depth());
            }
            d = (2 * d).max(d + 1).min(limit);
        }
    }

    /// Index `q ≥ 0` of the multiple `qα` nearest to `x`.
    pub fn nearest_multiple(&self, x: impl Into<BigInt>) -> Result<BigInt> {
        let x = x.into();
        if !x.is_positive() {
            return Err(Error::InvalidArgument(format!("x = {x} must be positive")));
        }
        let d = self.depth_for(&x)?;
        let conv = self.convergent(d as i64)?;
        let two = BigInt::from(2);
        // round(x·q_d / p_d)
        let mut q = (&two * &x * &conv.q + &conv.p) / (&two * &conv.p);
        let two_x = &two * &x;
        loop {
            let above: BigInt = -(&two * &q + BigInt::one());
            if self.sign_of_linear(&two_x, &above)?.0 == Ordering::Greater {
                q += 1;
                continue;
            }
            if q.is_positive() {
                let below: BigInt = -(&two * &q - BigInt::one());
                if self.sign_of_linear(&two_x, &below)?.0 == Ordering::Less {
                    q -= 1;
                    continue;
                }
            }
            return Ok(q);
        }
    }

    pub fn error_value(&self, x: impl Into<BigInt>) -> Result<ErrorValue> {
        let x = x.into();
        let q = self.nearest_multiple(x.clone())?;
        let (ord, _) = self.sign_of_linear(&x, &-&q)?;
        let sign = ErrorSign::from_ordering(ord).ok_or_else(|| self.out_of_depth())?;
        Ok(ErrorValue { x, q, sign })
    }

    pub fn sign_of_e(&self, x: impl Into<BigInt>) -> Result<SignDecision> {
        let x = x.into();
        let q = self.nearest_multiple(x.clone())?;
        let (ord, depth_used) = self.sign_of_linear(&x, &-&q)?;
        let sign = ErrorSign::from_ordering(ord).ok_or_else(|| self.out_of_depth())?;
        Ok(SignDecision {
            x,
            sign,
            depth_used,
        })
    }

    /// Orders `E(x)` against `E(y)`.
    pub fn compare_e(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Ordering> {
        let (x, y) = (x.into(), y.into());
        if x == y {
            return Ok(Ordering::Equal);
        }
        let ex = self.error_value(x)?;
        let ey = self.error_value(y)?;
        self.compare_values(&ex, &ey)
    }

    pub fn compare_values(&self, ex: &ErrorValue, ey: &ErrorValue) -> Result<Ordering> {
        if ex.x == ey.x {
            return Ok(Ordering::Equal);
        }
        let a = &ex.x - &ey.x;
        let b = &ey.q - &ex.q;
        Ok(self.sign_of_linear(&a, &b)?.0)
    }

    /// Orders `|E(x)|` against `|E(y)|`.
    pub fn compare_abs_values(&self, ex: &ErrorValue, ey: &ErrorValue) -> Result<Ordering> {
        if ex.x == ey.x {
            return Ok(Ordering::Equal);
        }
        let (sx, sy) = (ex.sign.unit(), ey.sign.unit());
        let a = &sx * &ex.x - &sy * &ey.x;
        let b = &sy * &ey.q - &sx * &ex.q;
        Ok(self.sign_of_linear(&a, &b)?.0)
    }

    pub fn compare_abs_e(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Ordering> {
        let ex = self.error_value(x)?;
        let ey = self.error_value(y)?;
        self.compare_abs_values(&ex, &ey)
    }

    /// Orders `E(x)` against `(num/den)·α`.
    pub fn compare_e_to_alpha_multiple(
        &self,
        x: impl Into<BigInt>,
        num: i64,
        den: u64,
    ) -> Result<Ordering> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let ex = self.error_value(x)?;
        let den = BigInt::from(den);
        let a = &den * &ex.x;
        let b = -(&den * &ex.q + BigInt::from(num));
        Ok(self.sign_of_linear(&a, &b)?.0)
    }

    /// Rational enclosure of `E(x)` narrower than `min_width`.
    pub fn error_interval(
        &self,
        x: impl Into<BigInt>,
        min_width: &BigRational,
    ) -> Result<ErrorInterval> {
        if !min_width.is_positive() {
            return Err(Error::InvalidArgument("width must be positive".into()));
        }
        let x = x.into();
        let q = self.nearest_multiple(x.clone())?;
        if q.is_zero() {
            let exact = BigRational::from_integer(x.clone());
            return Ok(ErrorInterval {
                x,
                q,
                lo: exact.clone(),
                hi: exact,
                depth: 0,
            });
        }
        let limit = self.max_bracket()?;
        let xr = BigRational::from_integer(x.clone());
        let qr = BigRational::from_integer(q.clone());
        for d in 0..=limit {
            let c0 = self.convergent(d as i64)?;
            let c1 = self.convergent(d as i64 + 1)?;
            let width = BigRational::new(q.abs(), &c0.q * &c1.q);
            if &width >= min_width {
                continue;
            }
            let e0 = &xr - &qr * BigRational::new(c0.p, c0.q);
            let e1 = &xr - &qr * BigRational::new(c1.p, c1.q);
            let (lo, hi) = if e0 < e1 { (e0, e1) } else { (e1, e0) };
            return Ok(ErrorInterval {
                x,
                q,
                lo,
                hi,
                depth: d + 2,
            });
        }
        Err(self.out_of_depth())
    }

    /// Writes `p = i·p_{n-1} + j·p_n` with `i ≤ k`, assuming
    /// `|E(p)| < |E(p_{n-1})|` and `p ≤ k·p_{n+1}`.
    ///
    /// The descent removes `p_n` while `E` keeps the sign of `E(p_n)` and
    /// removes `p_{n+1}` (or `p_{n-1}` below it) otherwise.
    pub fn decompose_by_approx(
        &self,
        p: impl Into<BigInt>,
        n: i64,
        k: u64,
    ) -> Result<(u64, BigInt)> {
        let p = p.into();
        if n < 0 {
            return Err(Error::InvalidArgument(format!("index {n} < 0")));
        }
        if !p.is_positive() {
            return Err(Error::InvalidArgument(format!("p = {p} must be positive")));
        }
        let prev = self.numerator(n - 1)?;
        let cur = self.numerator(n)?;
        let next = self.numerator(n + 1)?;
        let a_next = BigInt::from(self.quotient((n + 1) as usize)?);

        let ep = self.error_value(p.clone())?;
        let eprev = self.error_value(prev.clone())?;
        if self.compare_abs_values(&ep, &eprev)? != Ordering::Less {
            return Err(Error::NoDecomposition(format!(
                "|E({p})| is not below |E({prev})|"
            )));
        }
        if p > &next * k {
            return Err(Error::NoDecomposition(format!("{p} exceeds {k}·{next}")));
        }

        let cur_sign = self.error_value(cur.clone())?.sign;
        let mut rest = p.clone();
        let mut i = 0u64;
        let mut j = BigInt::zero();
        while rest.is_positive() {
            let sign = self.error_value(rest.clone())?.sign;
            if sign == cur_sign {
                if rest < cur {
                    return Err(stuck(&p, &rest));
                }
                rest -= &cur;
                j += 1;
            } else if rest >= next {
                rest -= &next;
                i += 1;
                j += &a_next;
            } else if rest >= prev {
                rest -= &prev;
                i += 1;
            } else {
                return Err(stuck(&p, &rest));
            }
        }
        if i > k {
            return Err(Error::NoDecomposition(format!(
                "descent for {p} used i = {i} > {k}"
            )));
        }
        Ok((i, j))
    }
}

fn stuck(p: &BigInt, rest: &BigInt) -> Error {
    Error::NoDecomposition(format!("descent for {p} stalled at {rest}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> Alpha {
        Alpha::parse(s).unwrap()
    }

    /// `x - q·α` in floating point for quadratic irrationals known in closed form.
    fn float_error(x: f64, a: f64) -> f64 {
        x - (x / a).round() * a
    }

    #[test]
    fn intervals_bracket_closed_forms() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let width = BigRational::new(1.into(), 100.into());
        let cases = [
            ("[1;(1)]", 1u64, phi, 1),
            ("[1;(1)]", 2, phi, 1),
            ("[1;(2)]", 3, 2f64.sqrt(), 2),
        ];
        for (spec, x, a, q) in cases {
            let iv = alpha(spec).error_interval(x, &width).unwrap();
            assert_eq!(iv.q, BigInt::from(q));
            assert!(iv.width() < width);
            let lo: f64 = num_traits::ToPrimitive::to_f64(&iv.lo).unwrap();
            let hi: f64 = num_traits::ToPrimitive::to_f64(&iv.hi).unwrap();
            let e = float_error(x as f64, a);
            assert!(
                lo - 1e-12 <= e && e <= hi + 1e-12,
                "{spec} {x}: {lo} {e} {hi}"
            );
        }
    }

    #[test]
    fn interval_refinement_nests() {
        let a = alpha("[1;2,(3,1)]");
        let mut prev: Option<ErrorInterval> = None;
        for den in [10, 100, 1000, 10_000, 100_000] {
            let iv = a
                .error_interval(37u64, &BigRational::new(1.into(), den.into()))
                .unwrap();
            if let Some(p) = &prev {
                assert!(p.lo <= iv.lo && iv.hi <= p.hi);
                assert!(iv.depth >= p.depth);
            }
            prev = Some(iv);
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(
            alpha("[1;(1)]").sign_of_e(1u64).unwrap().sign,
            ErrorSign::Negative
        );
        assert_eq!(
            alpha("[1;(1)]").sign_of_e(3u64).unwrap().sign,
            ErrorSign::Negative
        );
        assert_eq!(
            alpha("[1;(2)]").sign_of_e(3u64).unwrap().sign,
            ErrorSign::Positive
        );
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            alpha("[1;(1)]").compare_e(2u64, 5u64),
            Ok(Ordering::Greater)
        );
        assert_eq!(alpha("[1;(2)]").compare_e(7u64, 3u64), Ok(Ordering::Less));
        assert_eq!(
            alpha("[3;(1,4)]").compare_e(9u64, 9u64),
            Ok(Ordering::Equal)
        );
    }

    #[test]
    fn nearest_multiple_may_be_zero_above_two() {
        // α = 1 + √2
        let a = alpha("[2;(2)]");
        assert_eq!(a.nearest_multiple(1u64).unwrap(), BigInt::zero());
        assert_eq!(a.sign_of_e(1u64).unwrap().sign, ErrorSign::Positive);
        let iv = a
            .error_interval(1u64, &BigRational::new(1.into(), 10.into()))
            .unwrap();
        assert_eq!(iv.lo, iv.hi);
    }

    #[test]
    fn float_cross_check_on_small_values() {
        let pairs = [
            ("[1;(1)]", (1.0 + 5f64.sqrt()) / 2.0),
            ("[1;(2)]", 2f64.sqrt()),
            ("[2;(2)]", 1.0 + 2f64.sqrt()),
        ];
        for (spec, a) in pairs {
            let al = alpha(spec);
            for x in 1..300u64 {
                let e = float_error(x as f64, a);
                let want = if e < 0.0 {
                    ErrorSign::Negative
                } else {
                    ErrorSign::Positive
                };
                assert_eq!(al.sign_of_e(x).unwrap().sign, want, "{spec} {x}");
            }
        }
    }

    #[test]
    fn threshold_helper() {
        // E(2) = 2 - φ ≈ 0.382 and φ/4 ≈ 0.4045
        let a = alpha("[1;(1)]");
        assert_eq!(
            a.compare_e_to_alpha_multiple(2u64, 1, 4),
            Ok(Ordering::Less)
        );
        assert_eq!(
            a.compare_e_to_alpha_multiple(2u64, 1, 5),
            Ok(Ordering::Greater)
        );
        assert_eq!(
            a.compare_e_to_alpha_multiple(1u64, -1, 2),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn decompose_examples() {
        let a = alpha("[1;(2)]");
        assert_eq!(a.decompose_by_approx(10u64, 2, 2), Ok((1, BigInt::from(1))));
        assert_eq!(a.decompose_by_approx(7u64, 2, 1), Ok((0, BigInt::from(1))));
        assert!(matches!(
            a.decompose_by_approx(5u64, 2, 1),
            Err(Error::NoDecomposition(_))
        ));
        assert!(matches!(
            a.decompose_by_approx(41u64, 2, 1),
            Err(Error::NoDecomposition(_))
        ));
    }

    #[test]
    fn finite_specs_fail_cleanly() {
        // 3/2 exactly: E(3) = 3 - 2·(3/2) = 0 cannot be signed.
        let a = alpha("[1;2]");
        assert!(matches!(
            a.sign_of_e(3u64),
            Err(Error::QuotientsExhausted { .. })
        ));
        assert_eq!(
            alpha("[1]").sign_of_e(1u64),
            Err(Error::QuotientsExhausted { index: 1 })
        );
    }

    #[test]
    fn depth_cap_is_enforced() {
        let a = Alpha::with_depth_cap("[1;(1)]".parse().unwrap(), 4);
        // Comparing E at two large neighbours needs many quotients.
        assert_eq!(
            a.compare_e(10_946u64, 17_711u64),
            Err(Error::ResolutionExceeded { cap: 4 })
        );
    }
}

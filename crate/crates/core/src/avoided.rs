//! The set of sums avoided by the partition, computed three independent ways:
//! the closed-form description in terms of convergents, the even-`z`
//! membership test on `E`, and a brute-force scan over a materialized
//! partition.
//!
//! The closed forms are stated for `1 < α < 2`. Inputs with `a_0 ≥ 2` are
//! replaced by their dual, which induces the same partition with the labels
//! exchanged and therefore avoids the same sums. Witness indices in the
//! returned entries refer to that `a_0 = 1` form.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::approx::{Alpha, ErrorSign, ErrorValue};
use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::partition::{build_partition_with, PartitionPrefix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    ConvergentNumerator { n: i64 },
    DoubleOfConvergent { n: i64 },
    IntermediateNumerator { n: i64, k: u64 },
}

impl EntryKind {
    /// Lower ranks win when one value has several descriptions.
    fn rank(&self) -> u8 {
        match self {
            EntryKind::ConvergentNumerator { .. } => 0,
            EntryKind::DoubleOfConvergent { .. } => 1,
            EntryKind::IntermediateNumerator { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EntryKind::ConvergentNumerator { .. } => "convergent",
            EntryKind::DoubleOfConvergent { .. } => "double",
            EntryKind::IntermediateNumerator { .. } => "intermediate",
        }
    }

    pub fn n(&self) -> i64 {
        match *self {
            EntryKind::ConvergentNumerator { n }
            | EntryKind::DoubleOfConvergent { n }
            | EntryKind::IntermediateNumerator { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AvoidedEntry {
    pub value: u64,
    pub kind: EntryKind,
}

impl Serialize for AvoidedEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let k = match self.kind {
            EntryKind::IntermediateNumerator { k, .. } => Some(k),
            _ => None,
        };
        let mut s = serializer.serialize_struct("AvoidedEntry", 3 + k.is_some() as usize)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("kind", self.kind.name())?;
        s.serialize_field("n", &self.kind.n())?;
        if let Some(k) = k {
            s.serialize_field("k", &k)?;
        }
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidedSetPrefix {
    pub cf: CfSpec,
    pub limit: u64,
    pub entries: Vec<AvoidedEntry>,
}

impl AvoidedSetPrefix {
    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

fn require_periodic(alpha: &Alpha) -> Result<()> {
    if alpha.cf().is_periodic() {
        Ok(())
    } else {
        Err(Error::Undecidable)
    }
}

fn is_odd(x: &BigInt) -> bool {
    x.is_odd()
}

/// Whether `2·p_n` is avoided. Indices refer to a spec with `a_0 = 1`.
pub fn double_is_avoided(alpha: &Alpha, n: i64) -> Result<bool> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("index {n} < 0")));
    }
    let p = alpha.numerator(n)?;
    let next = alpha.numerator(n + 1)?;
    let a = alpha.quotient((n + 1) as usize)?;
    if !is_odd(&p) {
        return Ok(false);
    }
    Ok((is_odd(&next) && a >= 3) || (!is_odd(&next) && a >= 2) || p == BigInt::from(1))
}

/// Whether `p_n + k·p_{n+1}` is avoided, for `1 ≤ k < a_{n+2}` and `n ≥ -1`.
pub fn intermediate_is_avoided(alpha: &Alpha, n: i64, k: u64) -> Result<bool> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("index {n} < -1")));
    }
    let a = alpha.quotient((n + 2) as usize)?;
    if k == 0 || k >= a {
        return Err(Error::InvalidArgument(format!(
            "k = {k} outside 1..={}",
            a.saturating_sub(1)
        )));
    }
    let p = alpha.numerator(n)?;
    let next = alpha.numerator(n + 1)?;
    let after = alpha.numerator(n + 2)?;
    Ok(!is_odd(&next) || (k == 1 && is_odd(&p)) || (k == a - 1 && is_odd(&after)))
}

fn small(x: &BigInt) -> Option<u64> {
    x.to_u64()
}

fn insert(map: &mut BTreeMap<u64, EntryKind>, value: u64, kind: EntryKind) {
    match map.get(&value) {
        Some(old) if old.rank() <= kind.rank() => {}
        _ => {
            map.insert(value, kind);
        }
    }
}

/// All avoided values `≤ limit` from the closed-form description.
pub fn avoided_set_theoretical(alpha: &Alpha, limit: u64) -> Result<AvoidedSetPrefix> {
    require_periodic(alpha)?;
    let (unit, _) = alpha.normalized();
    let limit_big = BigInt::from(limit);
    let mut map = BTreeMap::new();

    let mut n = 0i64;
    loop {
        let p = unit.numerator(n)?;
        if p > limit_big {
            break;
        }
        insert(
            &mut map,
            small(&p).unwrap(),
            EntryKind::ConvergentNumerator { n },
        );
        let twice = &p * 2u32;
        if twice <= limit_big && double_is_avoided(&unit, n)? {
            insert(
                &mut map,
                small(&twice).unwrap(),
                EntryKind::DoubleOfConvergent { n },
            );
        }
        n += 1;
    }

    let mut n = -1i64;
    loop {
        let base = unit.numerator(n)?;
        let step = unit.numerator(n + 1)?;
        if &base + &step > limit_big {
            break;
        }
        let a = unit.quotient((n + 2) as usize)?;
        for k in 1..a {
            let value = &base + &step * k;
            if value > limit_big {
                break;
            }
            if intermediate_is_avoided(&unit, n, k)? {
                insert(
                    &mut map,
                    small(&value).unwrap(),
                    EntryKind::IntermediateNumerator { n, k },
                );
            }
        }
        n += 1;
    }

    Ok(AvoidedSetPrefix {
        cf: unit.cf().clone(),
        limit,
        entries: map
            .into_iter()
            .map(|(value, kind)| AvoidedEntry { value, kind })
            .collect(),
    })
}

/// Convergent numerators `p_n ≤ limit` of the `a_0 = 1` form, ascending.
pub fn convergent_numerator_set(alpha: &Alpha, limit: u64) -> Result<Vec<u64>> {
    require_periodic(alpha)?;
    let (unit, _) = alpha.normalized();
    let mut out = Vec::new();
    for n in 0.. {
        match small(&unit.numerator(n)?) {
            Some(p) if p <= limit => out.push(p),
            _ => break,
        }
    }
    out.dedup();
    Ok(out)
}

/// The structural description of `x` when it qualifies as an avoided value.
pub fn classify(alpha: &Alpha, x: u64) -> Result<Option<EntryKind>> {
    require_periodic(alpha)?;
    let (unit, _) = alpha.normalized();
    let target = BigInt::from(x);
    let mut n = 0i64;
    loop {
        let p = unit.numerator(n)?;
        match p.cmp(&target) {
            Ordering::Equal => return Ok(Some(EntryKind::ConvergentNumerator { n })),
            Ordering::Greater => break,
            Ordering::Less => {}
        }
        n += 1;
    }
    if x.is_multiple_of(2) {
        let half = BigInt::from(x / 2);
        let mut n = 0i64;
        loop {
            let p = unit.numerator(n)?;
            if p > half {
                break;
            }
            if p == half && double_is_avoided(&unit, n)? {
                return Ok(Some(EntryKind::DoubleOfConvergent { n }));
            }
            n += 1;
        }
    }
    let mut n = -1i64;
    loop {
        let base = unit.numerator(n)?;
        let step = unit.numerator(n + 1)?;
        if &base + &step > target {
            break;
        }
        let diff = &target - &base;
        if (&diff % &step) == BigInt::from(0) {
            let k = small(&(&diff / &step)).unwrap();
            let a = unit.quotient((n + 2) as usize)?;
            if k >= 1 && k < a && intermediate_is_avoided(&unit, n, k)? {
                return Ok(Some(EntryKind::IntermediateNumerator { n, k }));
            }
        }
        n += 1;
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// The first even `z < 2x` showing that `x` is a same-part sum.
    pub witness: Option<u64>,
}

fn scan_even(
    unit: &Alpha,
    ex: &ErrorValue,
    x: u64,
    value: impl Fn(u64) -> Result<ErrorValue>,
) -> Result<Membership> {
    let beats = match ex.sign {
        ErrorSign::Positive => Ordering::Less,
        ErrorSign::Negative => Ordering::Greater,
    };
    for z in (2..2 * x).step_by(2) {
        let ez = value(z)?;
        if ez.sign == ex.sign && unit.compare_values(&ez, ex)? == beats {
            return Ok(Membership {
                member: false,
                witness: Some(z),
            });
        }
    }
    Ok(Membership {
        member: true,
        witness: None,
    })
}

/// `x` is avoided iff no even `z < 2x` has `E(z)` strictly between 0 and `E(x)`.
pub fn membership_test(alpha: &Alpha, x: u64) -> Result<Membership> {
    require_periodic(alpha)?;
    if x == 0 {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let (unit, _) = alpha.normalized();
    let ex = unit.error_value(x)?;
    scan_even(&unit, &ex, x, |z| unit.error_value(z))
}

/// Values `x ≤ limit` accepted by [`membership_test`].
pub fn membership_filter(alpha: &Alpha, limit: u64) -> Result<Vec<u64>> {
    membership_filter_with(alpha, limit, Exec::default())
}

pub fn membership_filter_with(alpha: &Alpha, limit: u64, exec: Exec) -> Result<Vec<u64>> {
    require_periodic(alpha)?;
    if limit == 0 {
        return Ok(Vec::new());
    }
    let (unit, _) = alpha.normalized();
    let top = (2 * limit).max(2);
    let table = par::try_map_range(exec, 1..=top, |z| unit.error_value(z))?;
    let lookup = |z: u64| Ok(table[(z - 1) as usize].clone());
    let verdicts = par::try_map_range(exec, 1..=limit, |x| {
        scan_even(&unit, &table[(x - 1) as usize], x, lookup).map(|m| m.member)
    })?;
    Ok((1..=limit)
        .filter(|&x| verdicts[(x - 1) as usize])
        .collect())
}

/// Values `x ≤ limit` that are not a sum of two distinct same-part elements.
pub fn avoided_set_bruteforce(partition: &PartitionPrefix, limit: u64) -> Result<Vec<u64>> {
    avoided_set_bruteforce_with(partition, limit, Exec::default())
}

pub fn avoided_set_bruteforce_with(
    partition: &PartitionPrefix,
    limit: u64,
    exec: Exec,
) -> Result<Vec<u64>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let need = limit - 1;
    if partition.n_max < need {
        return Err(Error::InsufficientPrefix {
            have: partition.n_max,
            need,
        });
    }
    let labels = &partition.labels;
    let avoided = par::map_range(exec, 1..=limit, |x| {
        (1..=(x - 1) / 2).all(|y| {
            let z = x - y;
            y == z || labels[(y - 1) as usize] != labels[(z - 1) as usize]
        })
    });
    Ok((1..=limit).filter(|&x| avoided[(x - 1) as usize]).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub x: u64,
    pub theoretical: bool,
    pub bruteforce: bool,
    pub membership: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub limit: u64,
    pub theoretical: Vec<u64>,
    pub bruteforce: Vec<u64>,
    pub membership: Vec<u64>,
    /// Smallest `x` where the three computations disagree.
    pub mismatch: Option<Mismatch>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Runs all three computations up to `limit` and reports the first disagreement.
pub fn cross_check(alpha: &Alpha, limit: u64, exec: Exec) -> Result<CrossCheck> {
    let theoretical = avoided_set_theoretical(alpha, limit)?.values();
    let partition = build_partition_with(alpha, limit.saturating_sub(1).max(1), exec)?;
    let bruteforce = avoided_set_bruteforce_with(&partition, limit, exec)?;
    let membership = membership_filter_with(alpha, limit, exec)?;
    let contains = |set: &[u64], x: u64| set.binary_search(&x).is_ok();
    let mismatch = (1..=limit)
        .map(|x| Mismatch {
            x,
            theoretical: contains(&theoretical, x),
            bruteforce: contains(&bruteforce, x),
            membership: contains(&membership, x),
        })
        .find(|m| !(m.theoretical == m.bruteforce && m.bruteforce == m.membership));
    Ok(CrossCheck {
        limit,
        theoretical,
        bruteforce,
        membership,
        mismatch,
    })
}

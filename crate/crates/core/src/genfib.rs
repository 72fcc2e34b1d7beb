//! Generalized Fibonacci sequences `s_n = s_{n-1} + s_{n-2}` with coprime seeds.
//!
//! Such a sequence is uniquely avoidable when `s_1 < s_2` or one seed is even,
//! and not avoidable otherwise. Both outcomes come from realizing the terms as
//! convergent numerators of a continued fraction whose tail is all ones.

use num_integer::Integer;
use serde::Serialize;

use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::graph::{analyze, build_sum_graph, find_quadruple_certificates, QuadrupleCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenFibSpec {
    s1: u64,
    s2: u64,
}

impl GenFibSpec {
    pub fn new(s1: u64, s2: u64) -> Result<Self> {
        if s1 == 0 || s2 == 0 || s1.gcd(&s2) != 1 {
            return Err(Error::NotCoprime(s1, s2));
        }
        Ok(GenFibSpec { s1, s2 })
    }

    pub fn s1(&self) -> u64 {
        self.s1
    }

    pub fn s2(&self) -> u64 {
        self.s2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    UniquelyAvoidable,
    NotAvoidable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    /// `s_1 = p_{n-1}`, `s_2 = p_n`.
    ConsecutiveNumerators,
    /// `s_2 = p_n`, `s_1 + s_2 = p_{n+1}`; `s_1 = p_{n+1} - p_n` is an
    /// intermediate numerator.
    IntermediateDifference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub cf: CfSpec,
    /// Index with `p_n = s_2`.
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenFibVerdict {
    pub verdict: Verdict,
    pub embedding: Embedding,
}

/// Terms `≤ limit`, ascending and without repeats.
pub fn genfib_sequence(spec: &GenFibSpec, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut a, mut b) = (spec.s1, spec.s2);
    if a <= limit {
        out.push(a);
    }
    while b <= limit.max(a) {
        if b <= limit {
            out.push(b);
        }
        let next = a + b;
        a = b;
        b = next;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `a_0 = 1, …, a_n` with `p_n / p_{n-1} = num / den` for coprime `num ≥ den`.
fn reversed_expansion(num: u64, den: u64) -> Vec<u64> {
    let mut quotients = Vec::new();
    let (mut x, mut y) = (num, den);
    while y != 0 {
        quotients.push(x / y);
        let r = x % y;
        x = y;
        y = r;
    }
    // End on a 1 so that the reversed list starts with a_0 = 1.
    let last = quotients.last_mut().unwrap();
    if *last > 1 {
        *last -= 1;
        quotients.push(1);
    }
    quotients.reverse();
    quotients
}

pub fn embed(spec: &GenFibSpec) -> Embedding {
    let (kind, num, den) = if spec.s1 <= spec.s2 {
        (EmbeddingKind::ConsecutiveNumerators, spec.s2, spec.s1)
    } else {
        (
            EmbeddingKind::IntermediateDifference,
            spec.s1 + spec.s2,
            spec.s2,
        )
    };
    let prefix = reversed_expansion(num, den);
    let top = prefix.len() as i64 - 1;
    let n = match kind {
        EmbeddingKind::ConsecutiveNumerators => top,
        EmbeddingKind::IntermediateDifference => top - 1,
    };
    Embedding {
        kind,
        cf: CfSpec::new(prefix, vec![1]).expect("quotients are positive"),
        n,
    }
}

pub fn classify_genfib(spec: &GenFibSpec) -> GenFibVerdict {
    let (s1, s2) = (spec.s1, spec.s2);
    // s1 = s2 forces s1 = s2 = 1, the Fibonacci numbers themselves.
    let verdict = if s1 <= s2 || s1 % 2 == 0 || s2 % 2 == 0 {
        Verdict::UniquelyAvoidable
    } else {
        Verdict::NotAvoidable
    };
    GenFibVerdict {
        verdict,
        embedding: embed(spec),
    }
}

/// The closed-form verdict with the sum-graph evidence on `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenFibReport {
    pub verdict: GenFibVerdict,
    pub bipartite: bool,
    pub components: usize,
    pub odd_cycle: Option<Vec<u64>>,
    pub certificates: Vec<QuadrupleCertificate>,
    /// Whether the certificates cover every vertex up to `n_max`.
    pub covered: bool,
}

pub fn genfib_report(spec: &GenFibSpec, n_max: u64) -> GenFibReport {
    let set = genfib_sequence(spec, 2 * n_max.max(1) - 1);
    let report = analyze(&build_sum_graph(&set, n_max));
    let (certificates, covered) = match find_quadruple_certificates(&set, n_max) {
        Ok(c) => (c, true),
        Err(e) => (e.certificates, false),
    };
    GenFibReport {
        verdict: classify_genfib(spec),
        bipartite: report.bipartite,
        components: report.components,
        odd_cycle: report.odd_cycle,
        certificates,
        covered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: u64, b: u64) -> GenFibSpec {
        GenFibSpec::new(a, b).unwrap()
    }

    #[test]
    fn sequences() {
        assert_eq!(genfib_sequence(&spec(1, 1), 20), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(
            genfib_sequence(&spec(3, 1), 30),
            vec![1, 3, 4, 5, 9, 14, 23]
        );
        assert_eq!(genfib_sequence(&spec(1, 4), 30), vec![1, 4, 5, 9, 14, 23]);
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(
            classify_genfib(&spec(1, 2)).verdict,
            Verdict::UniquelyAvoidable
        );
        assert_eq!(classify_genfib(&spec(3, 1)).verdict, Verdict::NotAvoidable);
        assert_eq!(
            classify_genfib(&spec(2, 1)).verdict,
            Verdict::UniquelyAvoidable
        );
        assert_eq!(
            classify_genfib(&spec(1, 1)).verdict,
            Verdict::UniquelyAvoidable
        );
        assert_eq!(classify_genfib(&spec(7, 5)).verdict, Verdict::NotAvoidable);
        assert_eq!(
            classify_genfib(&spec(7, 4)).verdict,
            Verdict::UniquelyAvoidable
        );
    }

    #[test]
    fn rejects_common_factor() {
        assert_eq!(GenFibSpec::new(4, 6), Err(Error::NotCoprime(4, 6)));
        assert_eq!(GenFibSpec::new(0, 1), Err(Error::NotCoprime(0, 1)));
    }

    #[test]
    fn embedding_realizes_terms() {
        for (s1, s2) in [(1, 1), (1, 2), (3, 5), (2, 7), (5, 3), (9, 2), (12, 1)] {
            let e = embed(&spec(s1, s2));
            assert_eq!(e.cf.prefix()[0], 1);
            let p = |n: i64| e.cf.convergent(n).unwrap().p;
            assert_eq!(p(e.n), s2.into(), "{s1},{s2}");
            match e.kind {
                EmbeddingKind::ConsecutiveNumerators => assert_eq!(p(e.n - 1), s1.into()),
                EmbeddingKind::IntermediateDifference => {
                    assert_eq!(p(e.n + 1), (s1 + s2).into());
                }
            }
        }
    }

    #[test]
    fn three_one_refuted_by_triangle() {
        let r = genfib_report(&spec(3, 1), 50);
        assert!(!r.bipartite);
        assert_eq!(r.odd_cycle, Some(vec![1, 2, 3]));
    }
}

//! The sum-graph `G(S)`: vertices `1..=n_max`, an edge `{x, y}` whenever
//! `x ≠ y` and `x + y ∈ S`. Avoiding partitions are exactly its proper
//! 2-colorings, so `S` is avoidable on the prefix iff the graph is bipartite
//! and uniquely avoidable iff it is also connected.
//!
//! Edges at vertices `≤ n_max` need every element of `S` up to `2·n_max - 1`;
//! a set truncated earlier silently describes a different graph.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::approx::Alpha;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::partition::{build_partition, Label};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumGraphPrefix {
    pub n_max: u64,
    pub s_values: Vec<u64>,
    adjacency: Vec<Vec<u64>>,
}

impl SumGraphPrefix {
    /// Neighbours of `v`, ascending.
    pub fn neighbors(&self, v: u64) -> &[u64] {
        &self.adjacency[(v - 1) as usize]
    }

    /// Every edge once, as `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (1..=self.n_max).flat_map(move |x| {
            self.neighbors(x)
                .iter()
                .filter(move |&&y| y > x)
                .map(move |&y| (x, y))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, x: u64, y: u64) -> bool {
        x != y && self.s_values.binary_search(&(x + y)).is_ok()
    }
}

pub fn build_sum_graph(s: &[u64], n_max: u64) -> SumGraphPrefix {
    build_sum_graph_with(s, n_max, Exec::default())
}

pub fn build_sum_graph_with(s: &[u64], n_max: u64, exec: Exec) -> SumGraphPrefix {
    let mut s_values = s.to_vec();
    s_values.sort_unstable();
    s_values.dedup();
    let adjacency = if n_max == 0 {
        Vec::new()
    } else {
        par::map_range(exec, 1..=n_max, |x| {
            s_values
                .iter()
                .filter(|&&t| t > x)
                .map(|&t| t - x)
                .take_while(|&y| y <= n_max)
                .filter(|&y| y != x)
                .collect()
        })
    };
    SumGraphPrefix {
        n_max,
        s_values,
        adjacency,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumGraphReport {
    pub bipartite: bool,
    pub components: usize,
    /// Smallest vertex of the component holding `i + 1`.
    pub component_of: Vec<u64>,
    /// `2^components` when bipartite, else zero.
    pub coloring_count: BigUint,
    /// A genuine odd cycle, starting at its smallest vertex.
    pub odd_cycle: Option<Vec<u64>>,
    /// Breadth-first coloring with every component root labeled `A`.
    pub coloring: Vec<Label>,
}

impl SumGraphReport {
    /// Smallest vertex of each component, ascending.
    pub fn representatives(&self) -> Vec<u64> {
        let mut reps: Vec<u64> = self
            .component_of
            .iter()
            .enumerate()
            .filter(|(i, &r)| r == *i as u64 + 1)
            .map(|(_, &r)| r)
            .collect();
        reps.sort_unstable();
        reps
    }
}

pub fn analyze(graph: &SumGraphPrefix) -> SumGraphReport {
    let n = graph.n_max as usize;
    let mut coloring: Vec<Option<Label>> = vec![None; n];
    let mut parent = vec![0u64; n];
    let mut depth = vec![0usize; n];
    let mut component_of = vec![0u64; n];
    let mut components = 0;
    let mut conflict: Option<(u64, u64)> = None;

    for root in 1..=graph.n_max {
        if coloring[(root - 1) as usize].is_some() {
            continue;
        }
        components += 1;
        coloring[(root - 1) as usize] = Some(Label::A);
        component_of[(root - 1) as usize] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let ui = (u - 1) as usize;
            let cu = coloring[ui].unwrap();
            for &v in graph.neighbors(u) {
                let vi = (v - 1) as usize;
                match coloring[vi] {
                    None => {
                        coloring[vi] = Some(cu.flip());
                        parent[vi] = u;
                        depth[vi] = depth[ui] + 1;
                        component_of[vi] = root;
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu && conflict.is_none() => conflict = Some((u, v)),
                    Some(_) => {}
                }
            }
        }
    }

    let odd_cycle = conflict.map(|(u, v)| odd_cycle_through(u, v, &parent, &depth));
    let bipartite = odd_cycle.is_none();
    let coloring_count = if bipartite {
        BigUint::one() << components
    } else {
        BigUint::default()
    };
    SumGraphReport {
        bipartite,
        components,
        component_of,
        coloring_count,
        odd_cycle,
        coloring: coloring.into_iter().map(Option::unwrap).collect(),
    }
}

/// Closes the tree paths from `u` and `v` to their common ancestor.
fn odd_cycle_through(u: u64, v: u64, parent: &[u64], depth: &[usize]) -> Vec<u64> {
    let d = |x: u64| depth[(x - 1) as usize];
    let up = |x: u64| parent[(x - 1) as usize];
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while d(a) > d(b) {
        a = up(a);
        left.push(a);
    }
    while d(b) > d(a) {
        b = up(b);
        right.push(b);
    }
    while a != b {
        a = up(a);
        b = up(b);
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    canonical_cycle(left)
}

fn canonical_cycle(cycle: Vec<u64>) -> Vec<u64> {
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap();
    let forward: Vec<u64> = (0..len).map(|i| cycle[(start + i) % len]).collect();
    let backward: Vec<u64> = (0..len).map(|i| cycle[(start + len - i) % len]).collect();
    forward.min(backward)
}

pub fn is_proper_coloring(graph: &SumGraphPrefix, labels: &[Label]) -> bool {
    labels.len() as u64 == graph.n_max
        && graph
            .edges()
            .all(|(x, y)| labels[(x - 1) as usize] != labels[(y - 1) as usize])
}

/// Up to `max_count` proper colorings with vertex 1 labeled `A`. The `i`-th
/// coloring flips component `j + 1` (in order of smallest vertex) when bit `j`
/// of `i` is set.
pub fn enumerate_partitions(graph: &SumGraphPrefix, max_count: usize) -> Vec<Vec<Label>> {
    let report = analyze(graph);
    if !report.bipartite || graph.n_max == 0 {
        return Vec::new();
    }
    let reps = report.representatives();
    let free = &reps[1..];
    let slot: BTreeMap<u64, usize> = free.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let total = if free.len() >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1usize << free.len()
    };
    (0..total.min(max_count))
        .map(|mask| {
            report
                .coloring
                .iter()
                .zip(&report.component_of)
                .map(|(&label, rep)| match slot.get(rep) {
                    Some(&bit) if bit < usize::BITS as usize && mask >> bit & 1 == 1 => {
                        label.flip()
                    }
                    _ => label,
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrupleCertificate {
    pub d: u64,
    pub a_plus_d: u64,
    pub c: u64,
    pub b_plus_c: u64,
    pub a: u64,
    pub b: u64,
    pub covers_below: u64,
}

impl QuadrupleCertificate {
    pub fn is_triple(&self) -> bool {
        self.d == self.b && self.c == self.a
    }

    /// Membership, arithmetic and coprimality conditions against `s`.
    pub fn holds_in(&self, s: &[u64]) -> bool {
        let has = |x: u64| s.binary_search(&x).is_ok();
        has(self.d)
            && has(self.a_plus_d)
            && has(self.c)
            && has(self.b_plus_c)
            && self.a_plus_d == self.a + self.d
            && self.b_plus_c == self.b + self.c
            && self.a.gcd(&self.b) == 1
            && self.a <= self.c
            && self.b <= self.d
            && self.covers_below == self.a + self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageNotReached {
    pub target: u64,
    pub max_cover: u64,
    pub certificates: Vec<QuadrupleCertificate>,
}

impl std::fmt::Display for CoverageNotReached {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "certificates cover below {} but not beyond {}",
            self.max_cover, self.target
        )
    }
}

impl std::error::Error for CoverageNotReached {}

fn triple(a: u64, b: u64) -> QuadrupleCertificate {
    QuadrupleCertificate {
        d: b,
        a_plus_d: a + b,
        c: a,
        b_plus_c: a + b,
        a,
        b,
        covers_below: a + b,
    }
}

/// Certificates whose covers strictly increase until one exceeds
/// `cover_target`. Triples `a, b, a + b ∈ S` are preferred; a general
/// quadruple is used only with bases below `a + b`, so the connecting paths
/// stay among the vertices it covers.
pub fn find_quadruple_certificates(
    s: &[u64],
    cover_target: u64,
) -> std::result::Result<Vec<QuadrupleCertificate>, CoverageNotReached> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    let has = |x: u64| s.binary_search(&x).is_ok();

    let mut candidates: Vec<(u64, u8, QuadrupleCertificate)> = Vec::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i..] {
            if has(a + b) && a.gcd(&b) == 1 {
                candidates.push((a + b, 0, triple(a, b)));
            }
        }
    }
    let best_triple = candidates.iter().map(|c| c.0).max().unwrap_or(0);
    if best_triple <= cover_target {
        candidates.extend(quadruples(&s).into_iter().map(|c| (c.covers_below, 1, c)));
    }
    candidates.sort_by_key(|(cover, rank, c)| (*cover, *rank, c.a, c.b));

    let mut chain = Vec::new();
    let mut reached = 0;
    for (cover, _, cert) in candidates {
        if cover > reached {
            reached = cover;
            chain.push(cert);
            if reached > cover_target {
                return Ok(chain);
            }
        }
    }
    Err(CoverageNotReached {
        target: cover_target,
        max_cover: reached,
        certificates: chain,
    })
}

fn quadruples(s: &[u64]) -> Vec<QuadrupleCertificate> {
    // difference -> ascending bases t with t, t + difference ∈ S
    let mut bases: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (i, &lo) in s.iter().enumerate() {
        for &hi in &s[i + 1..] {
            bases.entry(hi - lo).or_default().push(lo);
        }
    }
    let first_in = |list: &Vec<u64>, from: u64, below: u64| {
        let at = list.partition_point(|&t| t < from);
        list.get(at).copied().filter(|&t| t < below)
    };
    let diffs: Vec<u64> = bases.keys().copied().collect();
    let mut out = Vec::new();
    for &a in &diffs {
        for &b in &diffs {
            if a.gcd(&b) != 1 {
                continue;
            }
            let cover = a + b;
            let d = first_in(&bases[&a], b, cover);
            let c = first_in(&bases[&b], a, cover);
            if let (Some(d), Some(c)) = (d, c) {
                out.push(QuadrupleCertificate {
                    d,
                    a_plus_d: a + d,
                    c,
                    b_plus_c: b + c,
                    a,
                    b,
                    covers_below: cover,
                });
            }
        }
    }
    out
}

/// The unique `(x, y)` with `m = x·a - y·b`, `0 < x ≤ b` and `0 ≤ y < a`.
///
/// Such a pair always exists when `m < a + b`; for larger `m ≤ ab` some values
/// have no representation and yield [`Error::NoDecomposition`].
pub fn crt_decomposition(m: u64, a: u64, b: u64) -> Result<(u64, u64)> {
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    if m == 0 || m > a * b {
        return Err(Error::InvalidArgument(format!(
            "m = {m} outside 1..={}",
            a * b
        )));
    }
    // x ≡ m·a⁻¹ (mod b), taken in 1..=b
    let inv = mod_inverse(a % b, b);
    let mut x = ((m % b) as u128 * inv as u128 % b as u128) as u64;
    if x == 0 {
        x = b;
    }
    let xa = x * a;
    if xa < m {
        return Err(Error::NoDecomposition(format!(
            "{m} is not x·{a} - y·{b} with 0 < x ≤ {b}, 0 ≤ y < {a}"
        )));
    }
    let y = (xa - m) / b;
    Ok((x, y))
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// A proper coloring of the convergent-numerator graph on `1..=n_max` built
/// level by level: below the first index after which every quotient is at
/// least 2 the partition labels are kept; on each later level
/// `[p_{m-1}, p_m)` the values up to `⌊p_m/2⌋` take `free(x)` and each larger
/// `x` takes the label opposite to `p_m - x`.
pub fn free_interval_coloring(
    alpha: &Alpha,
    n_max: u64,
    mut free: impl FnMut(u64) -> Label,
) -> Result<Vec<Label>> {
    let (unit, _) = alpha.normalized();
    let start = unit.cf().tail_without_ones_from().ok_or_else(|| {
        Error::InvalidArgument("the tail has infinitely many quotients equal to 1".into())
    })?;
    let numerator = |n: i64| -> Result<u64> {
        use num_traits::ToPrimitive;
        unit.numerator(n)?
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("numerator exceeds 64 bits".into()))
    };
    let base_top = numerator(start as i64 - 1)?.min(n_max + 1);
    let mut labels = Vec::with_capacity(n_max as usize);
    if base_top > 1 {
        labels.extend(build_partition(&unit, base_top - 1)?.labels);
    }
    let mut m = start as i64;
    while (labels.len() as u64) < n_max {
        let lo = numerator(m - 1)?;
        let hi = numerator(m)?;
        debug_assert_eq!(labels.len() as u64 + 1, lo);
        for x in lo..hi.min(n_max + 1) {
            let label = if x <= hi / 2 {
                free(x)
            } else {
                labels[(hi - x - 1) as usize].flip()
            };
            labels.push(label);
        }
        m += 1;
    }
    Ok(labels)
}

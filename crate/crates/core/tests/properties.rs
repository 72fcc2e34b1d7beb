use std::cmp::Ordering;

use avoidance::avoided::avoided_set_theoretical;
use avoidance::graph::{analyze, build_sum_graph, find_quadruple_certificates};
use avoidance::partition::{build_partition, build_partition_with};
use avoidance::{Alpha, CfSpec, ErrorSign, Exec, Label};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;

fn periodic_cf() -> impl Strategy<Value = CfSpec> {
    (
        prop::collection::vec(1u64..=6, 1..=4),
        prop::collection::vec(1u64..=6, 1..=4),
    )
        .prop_map(|(prefix, period)| CfSpec::new(prefix, period).unwrap())
}

fn unit_cf() -> impl Strategy<Value = CfSpec> {
    periodic_cf().prop_map(|cf| cf.normalize_to_unit_interval().0)
}

fn float_value(cf: &CfSpec) -> f64 {
    let c = cf.convergent(40).unwrap();
    c.p.to_f64().unwrap() / c.q.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_identity(cf in periodic_cf()) {
        for n in -1..20i64 {
            let c = cf.convergent(n).unwrap();
            let prev = cf.convergent(n - 1).unwrap();
            let det = &c.p * &prev.q - &prev.p * &c.q;
            let want = if n % 2 == 0 { -BigInt::one() } else { BigInt::one() };
            prop_assert_eq!(det, want, "n = {}", n);
        }
    }

    #[test]
    fn numerators_grow(cf in periodic_cf()) {
        let cs = cf.convergents(25).unwrap();
        for w in cs.windows(2) {
            prop_assert!(w[1].p > w[0].p);
            prop_assert!(w[1].q >= w[0].q);
        }
    }

    #[test]
    fn text_round_trip(cf in periodic_cf()) {
        prop_assert_eq!(cf.to_string().parse::<CfSpec>().unwrap(), cf);
    }

    #[test]
    fn normalization_is_idempotent_and_invertible(cf in periodic_cf()) {
        let (unit, swapped) = cf.normalize_to_unit_interval();
        prop_assert_eq!(unit.prefix()[0], 1);
        prop_assert_eq!(unit.normalize_to_unit_interval(), (unit.clone(), false));
        prop_assert_eq!(swapped, cf.prefix()[0] >= 2);
        if swapped {
            prop_assert_eq!(unit.dual_of_unit().unwrap(), cf.clone());
        }
        // 1/α + 1/α' = 1
        let (a, b) = (float_value(&cf), float_value(&unit));
        if swapped {
            prop_assert!((1.0 / a + 1.0 / b - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn error_sign_matches_floating_point(cf in periodic_cf(), x in 1u64..100_000) {
        let alpha = Alpha::new(cf.clone());
        let a = float_value(&cf);
        let q = alpha.nearest_multiple(x).unwrap().to_f64().unwrap();
        let e = x as f64 - q * a;
        prop_assert!(e.abs() <= a / 2.0 + 1e-6);
        if e.abs() > 1e-6 {
            let want = if e < 0.0 { ErrorSign::Negative } else { ErrorSign::Positive };
            prop_assert_eq!(alpha.sign_of_e(x).unwrap().sign, want);
        }
    }

    #[test]
    fn nearest_multiple_is_additive(cf in periodic_cf(), x in 1u64..1_000_000, y in 1u64..1_000_000) {
        let alpha = Alpha::new(cf);
        let q = |v: u64| alpha.nearest_multiple(v).unwrap();
        let d: BigInt = q(x + y) - q(x) - q(y);
        prop_assert!(d.abs() <= BigInt::one());
    }

    #[test]
    fn decomposition_matches_search(cf in unit_cf(), n in 1i64..5, k in 1u64..4) {
        let alpha = Alpha::new(cf);
        let num = |m: i64| alpha.numerator(m).unwrap().to_u64().unwrap();
        let (prev, cur, next) = (num(n - 1), num(n), num(n + 1));
        let eprev = alpha.error_value(prev).unwrap();
        for p in 1..=k * next {
            let ep = alpha.error_value(p).unwrap();
            if alpha.compare_abs_values(&ep, &eprev).unwrap() != Ordering::Less {
                continue;
            }
            let exists = (0..=k).any(|i| i * prev <= p && (p - i * prev) % cur == 0);
            match alpha.decompose_by_approx(p, n, k) {
                Ok((i, j)) => {
                    prop_assert!(i <= k);
                    prop_assert_eq!(BigInt::from(i * prev) + &j * cur, BigInt::from(p));
                }
                Err(e) => prop_assert!(!exists, "p = {}: {}", p, e),
            }
        }
    }

    #[test]
    fn avoidability_matches_exhaustive_count(
        n_max in 1u64..=12,
        s in prop::collection::btree_set(1u64..24, 0..10),
    ) {
        let s: Vec<u64> = s.into_iter().collect();
        let report = analyze(&build_sum_graph(&s, n_max));
        let mut count = 0u64;
        for mask in 0u32..(1 << n_max) {
            let part = |v: u64| mask >> (v - 1) & 1;
            let avoids = (1..=n_max).all(|x| {
                (x + 1..=n_max).all(|y| part(x) != part(y) || s.binary_search(&(x + y)).is_err())
            });
            count += u64::from(avoids);
        }
        prop_assert_eq!(report.coloring_count.to_u64().unwrap(), count);
        prop_assert_eq!(report.bipartite, count > 0);
        prop_assert_eq!(report.odd_cycle.is_some(), count == 0);
    }

    #[test]
    fn certificates_are_sound(s in prop::collection::btree_set(1u64..60, 1..12), target in 1u64..40) {
        let s: Vec<u64> = s.into_iter().collect();
        if let Ok(certs) = find_quadruple_certificates(&s, target) {
            prop_assert!(!certs.is_empty());
            let cover = certs.iter().map(|c| c.covers_below).max().unwrap();
            prop_assert!(cover > target);
            for c in &certs {
                prop_assert!(c.holds_in(&s), "{:?}", c);
                let below = c.covers_below - 1;
                let report = analyze(&build_sum_graph(&s, below));
                prop_assert!(report.component_of.iter().all(|&r| r == 1), "{:?}", c);
            }
        }
    }

    #[test]
    fn theoretical_sets_are_prefixes(cf in periodic_cf(), l1 in 1u64..500, extra in 0u64..1500) {
        let alpha = Alpha::new(cf);
        let short = avoided_set_theoretical(&alpha, l1).unwrap().values();
        let long = avoided_set_theoretical(&alpha, l1 + extra).unwrap().values();
        prop_assert_eq!(&long[..short.len()], &short[..]);
        prop_assert!(long[short.len()..].iter().all(|&v| v > l1));
        prop_assert!(short.starts_with(&[1]));
    }

    #[test]
    fn partition_strategies_and_duality(cf in periodic_cf()) {
        let alpha = Alpha::new(cf.clone());
        let seq = build_partition_with(&alpha, 300, Exec::Sequential).unwrap();
        prop_assert_eq!(&seq, &build_partition_with(&alpha, 300, Exec::Parallel).unwrap());
        let unit = build_partition(&Alpha::new(cf.normalize_to_unit_interval().0), 300).unwrap();
        let flipped: Vec<Label> = unit.labels.iter().map(|l| l.flip()).collect();
        if seq.swapped {
            prop_assert_eq!(seq.labels, flipped);
        } else {
            prop_assert_eq!(seq.labels, unit.labels);
        }
    }
}

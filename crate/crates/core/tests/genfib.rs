use avoidance::genfib::{embed, genfib_sequence, EmbeddingKind, GenFibSpec};
use num_bigint::BigInt;

fn numerators(emb: &avoidance::genfib::Embedding, upto: usize) -> Vec<BigInt> {
    emb.cf
        .convergents(upto)
        .unwrap()
        .into_iter()
        .map(|c| c.p)
        .collect()
}

#[test]
fn consecutive_embedding_contains_every_term() {
    for s1 in 1..=12u64 {
        for s2 in s1..=30 {
            let Ok(spec) = GenFibSpec::new(s1, s2) else {
                continue;
            };
            let emb = embed(&spec);
            assert_eq!(emb.kind, EmbeddingKind::ConsecutiveNumerators);
            assert_eq!(emb.cf.prefix()[0], 1);
            let n = emb.n as usize;
            let p = numerators(&emb, n + 30);
            if n > 0 {
                assert_eq!(p[n - 1], BigInt::from(s1), "({s1},{s2})");
            }
            assert_eq!(p[n], BigInt::from(s2), "({s1},{s2})");
            for term in genfib_sequence(&spec, 100_000) {
                assert!(p.contains(&BigInt::from(term)), "({s1},{s2}) misses {term}");
            }
        }
    }
}

#[test]
fn difference_embedding_realizes_the_sum() {
    for s1 in 2..=30u64 {
        for s2 in 1..s1 {
            let Ok(spec) = GenFibSpec::new(s1, s2) else {
                continue;
            };
            let emb = embed(&spec);
            assert_eq!(emb.kind, EmbeddingKind::IntermediateDifference);
            let n = emb.n as usize;
            let p = numerators(&emb, n + 2);
            assert_eq!(p[n], BigInt::from(s2), "({s1},{s2})");
            assert_eq!(p[n + 1], BigInt::from(s1 + s2), "({s1},{s2})");
        }
    }
}

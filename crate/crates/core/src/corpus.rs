//! Reproducible pseudo-random periodic continued fractions for cross-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf::CfSpec;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;

/// `count` periodic specs: one to four prefix quotients with `a_0 ∈ {1, 2, 3}`,
/// one to four period quotients, every later quotient in `1..=6`.
pub fn corpus_generate(seed: u64, count: usize) -> Result<Vec<CfSpec>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "corpus count must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let prefix_len = rng.random_range(1..=4);
        let period_len = rng.random_range(1..=4);
        let mut prefix = vec![rng.random_range(1..=3)];
        prefix.extend((1..prefix_len).map(|_| rng.random_range(1..=6u64)));
        let period = (0..period_len)
            .map(|_| rng.random_range(1..=6u64))
            .collect();
        out.push(CfSpec::new(prefix, period)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(
            corpus_generate(7, 30).unwrap(),
            corpus_generate(7, 30).unwrap()
        );
        assert_ne!(
            corpus_generate(7, 30).unwrap(),
            corpus_generate(8, 30).unwrap()
        );
    }

    #[test]
    fn zero_count_rejected() {
        assert!(corpus_generate(1, 0).is_err());
    }

    #[test]
    fn respects_bounds() {
        for cf in corpus_generate(3, 200).unwrap() {
            assert!((1..=4).contains(&cf.prefix().len()));
            assert!((1..=4).contains(&cf.period().len()));
            assert!((1..=3).contains(&cf.prefix()[0]));
            assert!(cf
                .prefix()
                .iter()
                .chain(cf.period())
                .all(|&a| (1..=6).contains(&a)));
        }
    }
}

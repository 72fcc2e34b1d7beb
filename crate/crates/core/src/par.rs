//! Data-parallel helpers. With the `parallel` feature (on by default) the
//! [`Exec::Parallel`] strategy runs on the rayon pool; without it every
//! strategy runs sequentially. Results never depend on the strategy.

use std::ops::RangeInclusive;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// `f` applied to every value of `range`, in ascending order.
pub fn map_range<T, F>(exec: Exec, range: RangeInclusive<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().map(f).collect(),
        _ => range.map(f).collect(),
    }
}

/// Like [`map_range`], stopping at the first error in range order.
pub fn try_map_range<T, E, F>(exec: Exec, range: RangeInclusive<u64>, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(u64) -> Result<T, E> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            let results: Vec<Result<T, E>> = range.into_par_iter().map(f).collect();
            results.into_iter().collect()
        }
        _ => range.map(f).collect(),
    }
}

/// `f` over the items of a slice, keeping slice order.
pub fn map_slice<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |x: u64| x * x % 17;
        assert_eq!(
            map_range(Exec::Sequential, 1..=1000, f),
            map_range(Exec::Parallel, 1..=1000, f)
        );
    }

    #[test]
    fn first_error_wins() {
        let f = |x: u64| if x % 100 == 37 { Err(x) } else { Ok(x) };
        assert_eq!(try_map_range(Exec::Parallel, 1..=1000, f), Err(37));
        assert_eq!(try_map_range(Exec::Sequential, 1..=1000, f), Err(37));
    }
}

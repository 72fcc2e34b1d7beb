//! Exact tools for the partition of the positive integers induced by an
//! irrational `α > 1`: `n` goes to part A when the nearest integer multiple
//! of `α` is above `n`, and to part B when it is below.
//!
//! The crate works only from exact partial quotients. From them it builds
//! convergents, decides the sign of the error `E(x) = x - qα`, materializes the
//! partition, computes the set of sums it avoids three independent ways, and
//! analyses the sum-graph of arbitrary candidate sets.
//!
//! ```
//! use avoidance::{avoided, Alpha};
//!
//! let phi = Alpha::parse("[1;(1)]").unwrap();
//! let set = avoided::avoided_set_theoretical(&phi, 100).unwrap();
//! assert_eq!(set.values(), vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
//! ```

pub mod approx;
pub mod avoided;
pub mod cf;
pub mod corpus;
mod error;
pub mod genfib;
pub mod graph;
pub mod par;
pub mod partition;

pub use approx::{Alpha, ErrorInterval, ErrorSign, SignDecision, DEFAULT_DEPTH_CAP};
pub use cf::{CfSpec, Convergent, IntermediateNumerator};
pub use error::{Error, Result};
pub use par::Exec;
pub use partition::{Label, PartitionPrefix};

//! The two-part partition of `1..=n_max`: `A` when the nearest multiple of `α`
//! lies above `n`, `B` when it lies below.

use std::fmt;

use serde::Serialize;

use crate::approx::{Alpha, ErrorSign};
use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
        }
    }

    pub fn from_sign(sign: ErrorSign) -> Label {
        match sign {
            ErrorSign::Negative => Label::A,
            ErrorSign::Positive => Label::B,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPrefix {
    /// The `a_0 = 1` form the labels were computed from.
    pub cf: CfSpec,
    pub n_max: u64,
    /// `labels[i]` is the label of `i + 1`, already expressed for the input `α`.
    pub labels: Vec<Label>,
    pub swapped: bool,
}

impl PartitionPrefix {
    /// Wraps an arbitrary labeling of `1..=labels.len()`.
    pub fn from_labels(cf: CfSpec, labels: Vec<Label>) -> Self {
        PartitionPrefix {
            cf,
            n_max: labels.len() as u64,
            labels,
            swapped: false,
        }
    }

    pub fn label(&self, n: u64) -> Option<Label> {
        if n == 0 {
            return None;
        }
        self.labels.get((n - 1) as usize).copied()
    }

    pub fn part(&self, which: Label) -> Vec<u64> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == which)
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }
}

pub fn build_partition(alpha: &Alpha, n_max: u64) -> Result<PartitionPrefix> {
    build_partition_with(alpha, n_max, Exec::default())
}

pub fn build_partition_with(alpha: &Alpha, n_max: u64, exec: Exec) -> Result<PartitionPrefix> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let (unit, swapped) = alpha.normalized();
    let labels = par::try_map_range(exec, 1..=n_max, |n| {
        let label = Label::from_sign(unit.sign_of_e(n)?.sign);
        Ok(if swapped { label.flip() } else { label })
    })?;
    Ok(PartitionPrefix {
        cf: unit.cf().clone(),
        n_max,
        labels,
        swapped,
    })
}

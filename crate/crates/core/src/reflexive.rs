//! Reflexive weight systems: every `w_i` divides `mu`.
//!
//! Writing `q_i = mu / w_i` turns the condition into `sum 1/q_i = 1`, so the
//! systems of dimension `n` are enumerated through the nondecreasing
//! solutions of that equation in `n + 1` unit fractions.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::weights::WeightSystem;

/// Largest dimension enumerated unless a caller raises the bound.
pub const DEFAULT_MAX_DIMENSION: usize = 5;

/// Rows of the classical table for `n = 3`. `(2, 3, 3, 4)` is a valid
/// fourteenth system that the table leaves out.
pub const REFERENCE_TABLE_N3: [[u64; 4]; 13] = [
    [1, 1, 1, 1],
    [1, 1, 1, 3],
    [1, 1, 2, 2],
    [1, 1, 2, 4],
    [1, 2, 2, 5],
    [1, 1, 4, 6],
    [1, 2, 3, 6],
    [1, 3, 4, 4],
    [1, 2, 6, 9],
    [1, 4, 5, 10],
    [1, 3, 8, 12],
    [2, 3, 10, 15],
    [1, 6, 14, 21],
];

/// A partial list for `n = 4`. The row `(1, 1, 8, 20, 30)` is not reflexive
/// (`8` does not divide `60`) and so never appears in the enumeration.
pub const REFERENCE_TABLE_N4: [[u64; 5]; 20] = [
    [1, 1, 1, 1, 2],
    [1, 1, 2, 2, 2],
    [1, 1, 1, 1, 4],
    [1, 1, 1, 3, 3],
    [1, 1, 1, 2, 5],
    [2, 2, 2, 3, 3],
    [1, 1, 3, 3, 4],
    [1, 1, 2, 2, 6],
    [1, 1, 1, 3, 6],
    [1, 1, 3, 5, 5],
    [1, 1, 2, 4, 8],
    [1, 1, 4, 4, 10],
    [1, 1, 4, 6, 12],
    [1, 1, 2, 8, 12],
    [1, 1, 3, 10, 15],
    [1, 1, 4, 12, 18],
    [1, 1, 8, 10, 20],
    [1, 1, 6, 16, 24],
    [1, 1, 8, 20, 30],
    [1, 2, 12, 15, 30],
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflexiveError {
    #[error("dimension {n} exceeds the enumeration bound {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("dimension must be at least 1")]
    DimensionTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflexiveRecord {
    pub weights: WeightSystem,
    pub mu: u64,
    /// `q_i = mu / w_i`, aligned with the sorted weights.
    pub q: Vec<u64>,
}

pub fn is_reflexive(w: &WeightSystem) -> bool {
    w.weights().iter().all(|&x| w.mu().is_multiple_of(x))
}

pub fn enumerate_reflexive(n: usize) -> Result<Vec<ReflexiveRecord>, ReflexiveError> {
    enumerate_reflexive_bounded(n, DEFAULT_MAX_DIMENSION)
}

pub fn enumerate_reflexive_bounded(n: usize, max: usize) -> Result<Vec<ReflexiveRecord>, ReflexiveError> {
    if n == 0 {
        return Err(ReflexiveError::DimensionTooSmall);
    }
    if n > max {
        return Err(ReflexiveError::DimensionTooLarge { n, max });
    }
    let tuples = unit_fraction_tuples(n + 1);
    let mut records: Vec<ReflexiveRecord> = tuples.into_iter().map(record_from_q).collect();
    records.sort_by(|a, b| (a.mu, a.weights.weights()).cmp(&(b.mu, b.weights.weights())));
    records.dedup_by(|a, b| a.weights == b.weights);
    Ok(records)
}

fn record_from_q(q: Vec<u64>) -> ReflexiveRecord {
    let l = q.iter().fold(1u64, |acc, &x| acc.lcm(&x));
    let raw: Vec<i64> = q.iter().rev().map(|&x| (l / x) as i64).collect();
    let weights = WeightSystem::normalized(&raw).expect("positive weights");
    let mu = weights.mu();
    let q = weights.weights().iter().map(|&x| mu / x).collect();
    ReflexiveRecord { weights, mu, q }
}

/// All nondecreasing `(q_1, ..., q_len)` with `sum 1/q_i = 1`.
pub fn unit_fraction_tuples(len: usize) -> Vec<Vec<u64>> {
    if len == 1 {
        return vec![vec![1]];
    }
    // First term: 1/q <= 1 with strict inequality when more terms follow,
    // and len/q >= 1.
    (2..=len as u64)
        .into_par_iter()
        .flat_map_iter(|q0| {
            let mut out = Vec::new();
            let mut prefix = vec![q0];
            search(q0 as u128 - 1, q0 as u128, len - 1, &mut prefix, &mut out);
            out
        })
        .collect()
}

/// Extends `prefix` with `left` terms summing to `num / den`.
fn search(num: u128, den: u128, left: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let prev = *prefix.last().expect("nonempty prefix") as u128;
    if left == 1 {
        if num != 0 && den.is_multiple_of(num) && den / num >= prev {
            prefix.push((den / num) as u64);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    // 1/q <= num/den and left/q >= num/den
    let lo = prev.max(den.div_ceil(num));
    let hi = (left as u128 * den) / num;
    for q in lo..=hi {
        let rest_num = num * q - den;
        if rest_num == 0 {
            continue;
        }
        let rest_den = den * q;
        let g = rest_num.gcd(&rest_den);
        prefix.push(q as u64);
        search(rest_num / g, rest_den / g, left - 1, prefix, out);
        prefix.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TableDiff {
    /// Expected rows absent from the enumeration.
    pub missing: Vec<Vec<u64>>,
    /// Enumerated rows absent from the expected list.
    pub extra: Vec<Vec<u64>>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn table_compare(n: usize, expected: &[Vec<u64>]) -> Result<TableDiff, ReflexiveError> {
    let found: BTreeSet<Vec<u64>> = enumerate_reflexive(n)?.into_iter().map(|r| r.weights.weights().to_vec()).collect();
    let wanted: BTreeSet<Vec<u64>> = expected
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_unstable();
            r
        })
        .collect();
    Ok(TableDiff {
        missing: wanted.difference(&found).cloned().collect(),
        extra: found.difference(&wanted).cloned().collect(),
    })
}

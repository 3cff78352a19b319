//! Exact enumeration of distinct subset sums.
//!
//! The enumeration maintains the sorted list of distinct sums reachable from
//! a prefix of the value list and folds in one value at a time with a sorted
//! merge. Correctness needs only that the value order is translation
//! invariant (see [`AdditiveValue`]); no distinctness or sign assumptions
//! are made about the inputs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{AdditiveValue, Scalar};

/// Hard ceiling accepted for `cap` to keep memory in check: the sum list
/// can hold at most `2^cap` entries.
pub const MAX_SUBSET_CAP: usize = 26;

/// Distinct subset sums of a value list, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetSums<T> {
    /// Number of distinct sums; equals `sums.len()`.
    pub count: u64,
    /// The sums themselves, strictly increasing.
    pub sums: Vec<T>,
}

/// Distinct subset sums with an explicit zero element.
///
/// The explicit zero makes the function usable for vector values, where the
/// zero must carry the right dimension even when `values` is empty.
pub fn distinct_subset_sums_with_zero<T: AdditiveValue>(
    zero: T,
    values: &[T],
    cap: usize,
) -> Result<SubsetSums<T>> {
    let cap = cap.min(MAX_SUBSET_CAP);
    if values.len() > cap {
        return Err(Error::TooLarge {
            what: "subset-sum ground set",
            size: values.len() as u64,
            cap: cap as u64,
        });
    }
    let mut sums = vec![zero];
    for v in values {
        let shifted: Vec<T> = sums.iter().map(|s| s.add_ref(v)).collect();
        sums = merge_distinct(&sums, &shifted);
    }
    Ok(SubsetSums {
        count: sums.len() as u64,
        sums,
    })
}

/// Distinct subset sums of scalar values. The empty set contributes the
/// scalar zero, so the count is always at least 1.
pub fn distinct_subset_sums<T: Scalar>(values: &[T], cap: usize) -> Result<SubsetSums<T>> {
    distinct_subset_sums_with_zero(T::zero(), values, cap)
}

/// Merges two sorted lists, dropping duplicates (within and across lists).
fn merge_distinct<T: Ord + Clone>(left: &[T], right: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() || j < right.len() {
        let pick_left = match (left.get(i), right.get(j)) {
            (Some(l), Some(r)) => l <= r,
            (Some(_), None) => true,
            _ => false,
        };
        let v = if pick_left {
            let v = left[i].clone();
            i += 1;
            v
        } else {
            let v = right[j].clone();
            j += 1;
            v
        };
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

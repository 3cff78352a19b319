//! Tuples with pairwise-distinct entries, the basic inputs of every
//! counting problem in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A nonempty tuple whose entries are pairwise distinct.
///
/// Distinctness is checked once at construction; the rest of the crate
/// relies on it (difference factors are nonzero, sorted orders are strict).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct DistinctTuple<T: Scalar> {
    entries: Vec<T>,
}

impl<T: Scalar> DistinctTuple<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        // Sort indices to find any collision in O(n log n).
        let mut idx: Vec<usize> = (0..entries.len()).collect();
        idx.sort_by(|&i, &j| entries[i].cmp(&entries[j]));
        for w in idx.windows(2) {
            if entries[w[0]] == entries[w[1]] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::DuplicateEntries(a, b));
            }
        }
        Ok(DistinctTuple { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &T {
        &self.entries[i]
    }

    /// Indices of entries in increasing order: `sorted_indices()[rank]` is
    /// the original position of the rank-th smallest entry.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.entries.len()).collect();
        idx.sort_by(|&i, &j| self.entries[i].cmp(&self.entries[j]));
        idx
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }
}

impl<'de, T: Scalar> Deserialize<'de> for DistinctTuple<T> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<T>::deserialize(deserializer)?;
        DistinctTuple::new(entries).map_err(serde::de::Error::custom)
    }
}

/// The tuple `(1, 2, ..., n)` as rationals, a standard benchmark input.
pub fn first_n_integers(n: usize) -> Result<DistinctTuple<crate::scalar::Rational>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    DistinctTuple::new(
        (1..=n as i64)
            .map(crate::scalar::Rational::from_int)
            .collect(),
    )
}

//! Permutations of `{0, ..., n-1}` in one-line notation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image list: `map[i]` is the image of `i`.
/// Indices are 0-based everywhere, including serialized form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Validates that `map` is a bijection on `{0, ..., n-1}`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (i, &img) in map.iter().enumerate() {
            if img >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {img} at position {i} out of range for n={n}"
                )));
            }
            if seen[img] {
                return Err(Error::NotAPermutation(format!("image {img} repeats")));
            }
            seen[img] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// The product of pairwise-disjoint transpositions `(j, k)`.
    pub fn from_disjoint_transpositions(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for &(j, k) in pairs {
            for idx in [j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if j == k || touched[j] {
                return Err(Error::OverlappingPairs(j));
            }
            if touched[k] {
                return Err(Error::OverlappingPairs(k));
            }
            touched[j] = true;
            touched[k] = true;
            map.swap(j, k);
        }
        Ok(Permutation { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &img) in self.map.iter().enumerate() {
            inv[img] = i;
        }
        Permutation { map: inv }
    }

    /// Composition `self . other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    /// Applies the transposition `(j, k)` in place.
    pub fn swap_images(&mut self, j: usize, k: usize) {
        self.map.swap(j, k);
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let map = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(map).map_err(serde::de::Error::custom)
    }
}

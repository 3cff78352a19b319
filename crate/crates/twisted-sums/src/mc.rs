//! Seeded Monte Carlo sampling of `S(a, b; pi)` under uniform random `pi`.
//!
//! Sampling is split into fixed-size logical streams. Stream `c` draws its
//! permutations from a generator seeded by a fixed mix of `(seed, c)`, and
//! stream frequency tables merge by exact-value addition, so the report
//! depends only on `(inputs, samples, seed)` and never on how many worker
//! threads rayon happens to use.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::support::check_lengths;
use crate::tuple::DistinctTuple;

/// Samples per logical stream; the last stream may be shorter.
pub const STREAM_CHUNK: u64 = 8192;

/// Cap for [`permutation_histogram`]: `8! = 40320` cells.
pub const MAX_HISTOGRAM_N: usize = 8;

/// Summary of a sampling run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport<T: Scalar> {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// Number of distinct exact values seen; at most `samples`.
    pub distinct_observed: u64,
    /// Most frequent value, ties to the smallest.
    pub mode_value: T,
    pub mode_count: u64,
    /// `mode_count / samples`; at least `1/samples`.
    pub mode_estimate: f64,
    /// `n^(-5/2) ln n`, the comparison curve without its hidden constant.
    pub reference_curve: f64,
    /// `mode_estimate / reference_curve`; absent when the curve is zero.
    pub curve_ratio: Option<f64>,
}

/// SplitMix64 finalizer over a fixed combination of seed and stream index.
fn stream_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add((stream + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_plan(samples: u64) -> Vec<(u64, u64)> {
    let full = samples / STREAM_CHUNK;
    let rest = samples % STREAM_CHUNK;
    let mut plan: Vec<(u64, u64)> = (0..full).map(|c| (c, STREAM_CHUNK)).collect();
    if rest > 0 {
        plan.push((full, rest));
    }
    plan
}

/// Unbiased in-place shuffle.
fn shuffle(rng: &mut ChaCha8Rng, map: &mut [usize]) {
    for (i, v) in map.iter_mut().enumerate() {
        *v = i;
    }
    for i in (1..map.len()).rev() {
        let j = rng.gen_range(0..=i);
        map.swap(i, j);
    }
}

fn merge_counts<K: Ord>(mut into: BTreeMap<K, u64>, from: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, v) in from {
        *into.entry(k).or_insert(0) += v;
    }
    into
}

fn sampled_table<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    samples: u64,
    seed: u64,
) -> Result<BTreeMap<T, u64>> {
    check_lengths(a, b)?;
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let n = a.n();
    let table = stream_plan(samples)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, stream));
            let mut map = vec![0usize; n];
            let mut local: BTreeMap<T, u64> = BTreeMap::new();
            for _ in 0..count {
                shuffle(&mut rng, &mut map);
                let mut sum = T::zero();
                for (i, &j) in map.iter().enumerate() {
                    sum = sum.add_ref(&a.get(i).mul_ref(b.get(j)));
                }
                *local.entry(sum).or_insert(0) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, merge_counts);
    Ok(table)
}

/// The sampled exact-value frequency table, ascending by value.
pub fn sample_frequency_table<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    samples: u64,
    seed: u64,
) -> Result<Vec<(T, u64)>> {
    Ok(sampled_table(a, b, samples, seed)?.into_iter().collect())
}

/// Runs the sampler and summarizes mode mass and distinct-value coverage.
pub fn sample_sums<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    samples: u64,
    seed: u64,
) -> Result<McReport<T>> {
    let table = sampled_table(a, b, samples, seed)?;
    let n = a.n();
    let distinct_observed = table.len() as u64;
    let (mode_value, mode_count) = table
        .into_iter()
        .fold(None::<(T, u64)>, |best, (value, count)| match best {
            Some((bv, bc)) if bc >= count => Some((bv, bc)),
            _ => Some((value, count)),
        })
        .expect("samples >= 1 fills the table");
    let mode_estimate = mode_count as f64 / samples as f64;
    let nf = n as f64;
    let reference_curve = nf.powf(-2.5) * nf.ln();
    let curve_ratio = if reference_curve > 0.0 {
        Some(mode_estimate / reference_curve)
    } else {
        None
    };
    Ok(McReport {
        n,
        samples,
        seed,
        distinct_observed,
        mode_value,
        mode_count,
        mode_estimate,
        reference_curve,
        curve_ratio,
    })
}

/// Frequency of each sampled permutation, keyed by its image vector.
///
/// Intended for uniformity diagnostics at small `n`; capped at
/// [`MAX_HISTOGRAM_N`].
pub fn permutation_histogram(
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<(Vec<usize>, u64)>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > MAX_HISTOGRAM_N {
        return Err(Error::TooLarge {
            what: "histogram tuple length",
            size: n as u64,
            cap: MAX_HISTOGRAM_N as u64,
        });
    }
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let table = stream_plan(samples)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, stream));
            let mut map = vec![0usize; n];
            let mut local: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for _ in 0..count {
                shuffle(&mut rng, &mut map);
                *local.entry(map.clone()).or_insert(0) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, merge_counts);
    Ok(table.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational, Rational};
    use crate::support::{exact_mode_mass, exact_support};
    use crate::tuple::first_n_integers;

    fn ints(values: &[i64]) -> DistinctTuple<Rational> {
        DistinctTuple::new(values.iter().map(|&v| Rational::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn two_entry_mode_mass_is_near_one_half() {
        let a = ints(&[1, 2]);
        let report = sample_sums(&a, &a, 1000, 7).unwrap();
        assert_eq!(report.distinct_observed, 2);
        assert!(report.mode_estimate >= 0.44 && report.mode_estimate <= 0.56);
        assert!(report.mode_estimate >= 1.0 / report.samples as f64);
    }

    #[test]
    fn single_entry_is_deterministic() {
        let a = ints(&[5]);
        let b = ints(&[3]);
        let report = sample_sums(&a, &b, 50, 99).unwrap();
        assert_eq!(report.distinct_observed, 1);
        assert_eq!(report.mode_estimate, 1.0);
        assert_eq!(report.mode_value, Rational::from_int(15));
        assert_eq!(report.curve_ratio, None);
    }

    #[test]
    fn identical_inputs_give_identical_reports_across_thread_counts() {
        let a = first_n_integers(5).unwrap();
        let b = ints(&[3, -1, 4, 1, 5]);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_sums(&a, &b, 20_000, 42).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one, four);
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&four).unwrap()
        );
    }

    #[test]
    fn mode_estimate_tracks_exact_mass_at_n_4() {
        let a = first_n_integers(4).unwrap();
        let exact = exact_mode_mass(&a, &a, 4).unwrap();
        let samples = 200_000u64;
        let report = sample_sums(&a, &a, samples, 3).unwrap();
        let p = exact.mass;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!(
            (report.mode_estimate - p).abs() <= 3.0 * se,
            "estimate {} vs exact {p} (se {se})",
            report.mode_estimate
        );
    }

    #[test]
    fn distinct_observed_reaches_the_exact_support() {
        for n in [4usize, 5] {
            let a = first_n_integers(n).unwrap();
            let support = exact_support(&a, &a, n).unwrap();
            let samples = 50 * crate::support::factorial_u64(n);
            let report = sample_sums(&a, &a, samples, 11).unwrap();
            assert!(report.distinct_observed <= support.distinct_count);
            assert_eq!(report.distinct_observed, support.distinct_count);
        }
    }

    #[test]
    fn shuffle_is_uniform_by_chi_square() {
        let n = 4;
        let samples = 1_000_000u64;
        let hist = permutation_histogram(n, samples, 2024).unwrap();
        assert_eq!(hist.len(), 24);
        let expected = samples as f64 / 24.0;
        let chi2: f64 = hist
            .iter()
            .map(|(_, c)| {
                let d = *c as f64 - expected;
                d * d / expected
            })
            .sum();
        // Upper critical value of chi-square with 23 degrees of freedom at
        // significance 1e-6.
        assert!(chi2 < 70.0, "chi-square statistic {chi2}");
    }

    #[test]
    fn frequency_table_is_sorted_and_totals_samples() {
        let a = ints(&[2, 5, 9]);
        let b = ints(&[1, 4, 8]);
        let table = sample_frequency_table(&a, &b, 5000, 17).unwrap();
        let total: u64 = table.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 5000);
        assert!(table.windows(2).all(|w| w[0].0 < w[1].0));
        let report = sample_sums(&a, &b, 5000, 17).unwrap();
        let max = table.iter().map(|(_, c)| *c).max().unwrap();
        assert_eq!(report.mode_count, max);
        assert_eq!(report.distinct_observed, table.len() as u64);
    }

    #[test]
    fn gaussian_tuples_sample_too() {
        let a = DistinctTuple::new(vec![
            GaussianRational::from_ints(0, 0),
            GaussianRational::from_ints(1, 0),
            GaussianRational::from_ints(0, 1),
        ])
        .unwrap();
        let report = sample_sums(&a, &a, 2000, 5).unwrap();
        assert!(report.distinct_observed <= 6);
        assert!(report.mode_estimate >= 1.0 / 2000.0);
    }

    #[test]
    fn zero_samples_and_length_mismatch_are_rejected() {
        let a = ints(&[1, 2]);
        let b = ints(&[1, 2, 3]);
        assert!(matches!(sample_sums(&a, &a, 0, 1), Err(Error::ZeroSamples)));
        assert!(matches!(
            sample_sums(&a, &b, 10, 1),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            permutation_histogram(9, 10, 1),
            Err(Error::TooLarge { .. })
        ));
    }
}

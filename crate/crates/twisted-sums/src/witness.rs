//! Recursive witness families of subset sums, and machine-checkable
//! certificates for lower bounds on the support size.
//!
//! Given strictly positive values `s(1), ..., s(m)`, the family `F(m)` of
//! index subsets is built recursively: `F(0) = {emptyset}` and
//! `F(q) = F(q-1) union { {1..q} \ T : T in F(t(q)) }`, where `t(q)` is the
//! largest `t <= q-1` whose prefix sum stays strictly below `s(q)`. All
//! member sums are pairwise distinct, and the family sizes obey
//! `|F(q)| = |F(q-1)| + |F(t(q))|`.
//!
//! A [`WitnessCertificate`] packages such a family, pulled back through a
//! greedy pairing of two tuples, into a self-contained lower-bound claim on
//! the number of distinct twisted sums. Verification recomputes everything
//! from the tuples and the certificate alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::PairFamily;
use crate::perm::Permutation;
use crate::scalar::{Rational, Scalar, WitnessValue};
use crate::support::{identity_sum, twisted_sum};
use crate::tuple::DistinctTuple;

/// Default ceiling on the number of materialized sums or family members.
pub const DEFAULT_FAMILY_CAP: u64 = 50_000_000;

/// Default ceiling for fully materialized subset families (index lists are
/// heavier than bare sums).
pub const DEFAULT_WITNESS_CAP: u64 = 2_000_000;

fn check_positive<T: WitnessValue>(s: &[T]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (i, v) in s.iter().enumerate() {
        if !v.is_strictly_positive() {
            return Err(Error::NonPositiveValue(i));
        }
    }
    Ok(())
}

/// Prefix sums `P(0) = 0, P(q) = s(1) + ... + s(q)`.
fn prefix_sums<T: WitnessValue>(s: &[T]) -> Vec<T> {
    let mut pref = Vec::with_capacity(s.len() + 1);
    pref.push(s[0].zero_like());
    for v in s {
        let next = pref.last().unwrap().add_ref(v);
        pref.push(next);
    }
    pref
}

/// The threshold index for the full list: the largest `t` in `[0, m-1]`
/// with `s(1) + ... + s(t) < s(m)`.
pub fn empirical_t<T: WitnessValue>(s: &[T]) -> Result<usize> {
    check_positive(s)?;
    let chain = t_chain(s)?;
    Ok(*chain.last().unwrap())
}

/// Threshold indices for every prefix: `t_chain(s)[q-1]` is the `t` value
/// used when extending the family from `F(q-1)` to `F(q)`.
pub fn t_chain<T: WitnessValue>(s: &[T]) -> Result<Vec<usize>> {
    check_positive(s)?;
    let pref = prefix_sums(s);
    let mut chain = Vec::with_capacity(s.len());
    for q in 1..=s.len() {
        // Prefix sums are strictly increasing, so binary search applies.
        // partition_point over t = 0..q counts how many satisfy P(t) < s(q);
        // t = 0 always does because s(q) > 0.
        let count = pref[..q].partition_point(|p| p < &s[q - 1]);
        chain.push(count - 1);
    }
    Ok(chain)
}

/// The size side of the recursion: thresholds and `|F(q)|` for every prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyPlan {
    pub m: usize,
    /// `t_chain[q-1]` is the threshold used at step `q`.
    pub t_chain: Vec<usize>,
    /// `sizes[q] = |F(q)|` for `q = 0..=m`.
    pub sizes: Vec<u64>,
}

impl FamilyPlan {
    pub fn family_size(&self) -> u64 {
        *self.sizes.last().unwrap()
    }
}

/// Computes thresholds and family sizes without materializing anything.
pub fn family_plan<T: WitnessValue>(s: &[T]) -> Result<FamilyPlan> {
    let chain = t_chain(s)?;
    let m = s.len();
    let mut sizes: Vec<u64> = Vec::with_capacity(m + 1);
    sizes.push(1);
    for q in 1..=m {
        let t = chain[q - 1];
        let next = sizes[q - 1]
            .checked_add(sizes[t])
            .ok_or(Error::TooLarge {
                what: "witness family size",
                size: u64::MAX,
                cap: u64::MAX,
            })?;
        sizes.push(next);
    }
    Ok(FamilyPlan {
        m,
        t_chain: chain,
        sizes,
    })
}

/// All member sums of `F(m)`, sorted ascending, without materializing the
/// subsets themselves. Scales to large `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySums<T> {
    pub plan: FamilyPlan,
    /// Observed `|F(q)|` from the actual sum lists, `q = 0..=m`. Equal to
    /// `plan.sizes`; recorded separately so the size recurrence is checked
    /// against materialized data rather than against itself.
    pub observed_sizes: Vec<u64>,
    /// Member sums of `F(m)`, strictly increasing.
    pub sums: Vec<T>,
}

/// Computes the sorted member sums of `F(m)` level by level.
///
/// The new sums at step `q` are `P(q) - sum(T)` for `T in F(t(q))`; every
/// one of them exceeds `P(q-1)`, the largest possible earlier sum, so each
/// level is a straight concatenation and distinctness reduces to strict
/// monotonicity, which is checked explicitly.
pub fn family_sums<T: WitnessValue>(s: &[T], cap: u64) -> Result<FamilySums<T>> {
    let plan = family_plan(s)?;
    let m = plan.m;
    let needed: BTreeSet<usize> = plan.t_chain.iter().copied().collect();
    let retained_total: u64 = needed.iter().map(|&q| plan.sizes[q]).sum();
    let budget = plan
        .family_size()
        .checked_add(retained_total)
        .unwrap_or(u64::MAX);
    if budget > cap {
        return Err(Error::TooLarge {
            what: "witness family sums",
            size: budget,
            cap,
        });
    }

    let pref = prefix_sums(s);
    let mut levels: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    let mut current = vec![s[0].zero_like()];
    if needed.contains(&0) {
        levels.insert(0, current.clone());
    }
    let mut observed_sizes: Vec<u64> = vec![1];

    for q in 1..=m {
        let t = plan.t_chain[q - 1];
        let base = levels
            .get(&t)
            .expect("threshold level retained by construction");
        // base is ascending, so P(q) - v over reversed base is ascending.
        let block: Vec<T> = base.iter().rev().map(|v| pref[q].sub_ref(v)).collect();
        if let Some(last_old) = current.last() {
            if let Some(first_new) = block.first() {
                if first_new <= last_old {
                    return Err(Error::DistinctnessViolation(format!(
                        "step {q}: new sum {first_new:?} does not exceed previous maximum {last_old:?}"
                    )));
                }
            }
        }
        for w in block.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::DistinctnessViolation(format!(
                    "step {q}: block sums out of order"
                )));
            }
        }
        current.extend(block);
        observed_sizes.push(current.len() as u64);
        if current.len() as u64 != plan.sizes[q] {
            return Err(Error::Invariant(format!(
                "family size at step {q}: observed {}, planned {}",
                current.len(),
                plan.sizes[q]
            )));
        }
        if needed.contains(&q) {
            levels.insert(q, current.clone());
        }
    }

    Ok(FamilySums {
        plan,
        observed_sizes,
        sums: current,
    })
}

/// A fully materialized witness family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFamily<T> {
    pub plan: FamilyPlan,
    /// Members in construction order; each member lists 0-based positions
    /// into `s`, strictly increasing.
    pub members: Vec<Vec<u32>>,
    /// Member sums in the same order, evaluated from scratch.
    pub sums: Vec<T>,
}

/// Materializes `F(m)` and evaluates every member sum directly from `s`,
/// then checks pairwise distinctness of the sums.
///
/// Unlike [`family_sums`], nothing here leans on the concatenation argument:
/// each sum is an independent fold over the member's indices, so the
/// distinctness check genuinely re-derives the theorem on this input.
pub fn witness_family<T: WitnessValue>(s: &[T], cap: u64) -> Result<WitnessFamily<T>> {
    let plan = family_plan(s)?;
    let m = plan.m;
    if plan.family_size() > cap {
        return Err(Error::TooLarge {
            what: "witness family members",
            size: plan.family_size(),
            cap,
        });
    }
    let needed: BTreeSet<usize> = plan.t_chain.iter().copied().collect();
    let mut levels: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    let mut current: Vec<Vec<u32>> = vec![vec![]];
    if needed.contains(&0) {
        levels.insert(0, current.clone());
    }

    for q in 1..=m {
        let t = plan.t_chain[q - 1];
        let base = levels
            .get(&t)
            .expect("threshold level retained by construction");
        let mut block: Vec<Vec<u32>> = Vec::with_capacity(base.len());
        for member in base {
            // Complement of the member inside {0, ..., q-1}.
            let mut comp = Vec::with_capacity(q - member.len());
            let mut skip = member.iter().peekable();
            for i in 0..q as u32 {
                if skip.peek() == Some(&&i) {
                    skip.next();
                } else {
                    comp.push(i);
                }
            }
            block.push(comp);
        }
        current.extend(block);
        if current.len() as u64 != plan.sizes[q] {
            return Err(Error::Invariant(format!(
                "family size at step {q}: observed {}, planned {}",
                current.len(),
                plan.sizes[q]
            )));
        }
        if needed.contains(&q) {
            levels.insert(q, current.clone());
        }
    }

    let zero = s[0].zero_like();
    let sums: Vec<T> = current
        .iter()
        .map(|member| {
            member
                .iter()
                .fold(zero.clone(), |acc, &i| acc.add_ref(&s[i as usize]))
        })
        .collect();
    check_distinct_sums(&sums)?;

    Ok(WitnessFamily {
        plan,
        members: current,
        sums,
    })
}

fn check_distinct_sums<T: Ord + fmt::Debug>(sums: &[T]) -> Result<()> {
    let mut idx: Vec<usize> = (0..sums.len()).collect();
    idx.sort_by(|&i, &j| sums[i].cmp(&sums[j]));
    for w in idx.windows(2) {
        if sums[w[0]] == sums[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::DistinctnessViolation(format!(
                "members {a} and {b} share the sum {:?}",
                sums[a]
            )));
        }
    }
    Ok(())
}

/// Alignment of two pair families into one relabeling permutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alignment {
    /// `sigma(i)` tells which entry of `b` sits against position `i` of `a`.
    pub sigma: Permutation,
    /// Transpositions on `a`-indices, one per aligned pair, as original
    /// indices ordered by entry value.
    pub transpositions: Vec<(usize, usize)>,
    /// Step values `s(p) = x_a(p) * x_b(p)`, strictly positive; products of
    /// superadditive sequences, hence superadditive themselves.
    pub s: Vec<Rational>,
}

/// Aligns the first `min(r_a, r_b)` greedy pairs of `a` against those of
/// `b`: pair ends map to pair ends in matching value order, and unpaired
/// positions map in ascending order.
pub fn align_b(a_fam: &PairFamily, b_fam: &PairFamily) -> Result<Alignment> {
    if a_fam.n != b_fam.n {
        return Err(Error::LengthMismatch {
            left: a_fam.n,
            right: b_fam.n,
        });
    }
    let n = a_fam.n;
    let m = a_fam.r().min(b_fam.r());
    if m == 0 {
        return Err(Error::EmptyFamily);
    }
    let pairs_a = a_fam.pairs_original();
    let pairs_b = b_fam.pairs_original();

    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used_b = vec![false; n];
    for i in 0..m {
        let (ja, ka) = pairs_a[i];
        let (jb, kb) = pairs_b[i];
        map[ja] = Some(jb);
        map[ka] = Some(kb);
        used_b[jb] = true;
        used_b[kb] = true;
    }
    let mut free_b = (0..n).filter(|&j| !used_b[j]);
    let full: Vec<usize> = map
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| free_b.next().expect("counts match")))
        .collect();
    let sigma = Permutation::new(full)?;

    let s: Vec<Rational> = (0..m)
        .map(|i| a_fam.x[i].mul(&b_fam.x[i]))
        .collect();
    for (i, v) in s.iter().enumerate() {
        if !v.is_positive() {
            return Err(Error::Invariant(format!(
                "aligned step value s({}) = {v} is not positive",
                i + 1
            )));
        }
    }
    Ok(Alignment {
        sigma,
        transpositions: pairs_a[..m].to_vec(),
        s,
    })
}

/// A self-contained lower-bound certificate.
///
/// The claim: the permutations `relabeling . tau_T`, where `tau_T` composes
/// the transpositions selected by a family member `T`, produce
/// `claimed_count` pairwise distinct twisted sums, listed in `sums`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WitnessCertificate<T: Scalar> {
    pub relabeling: Permutation,
    /// Pairwise-disjoint index pairs of the first tuple.
    pub transpositions: Vec<(usize, usize)>,
    /// Step values, one per transposition (informational; soundness is
    /// re-derived from the sums).
    pub s: Vec<T>,
    /// Family members: each selects a subset of the transpositions by
    /// 0-based position, strictly increasing.
    pub family: Vec<Vec<u32>>,
    /// Claimed twisted sums, aligned with `family`.
    pub sums: Vec<T>,
    pub claimed_count: u64,
}

/// Builds a witness certificate for two real tuples via greedy pairing,
/// alignment, and the recursive family on `s(p) = x_a(p) x_b(p)`.
///
/// For `n = 1` the certificate degenerates to the single identity sum.
pub fn build_certificate(
    a: &DistinctTuple<Rational>,
    b: &DistinctTuple<Rational>,
) -> Result<WitnessCertificate<Rational>> {
    crate::support::check_lengths(a, b)?;
    let n = a.n();
    if n == 1 {
        return Ok(WitnessCertificate {
            relabeling: Permutation::identity(1),
            transpositions: vec![],
            s: vec![],
            family: vec![vec![]],
            sums: vec![identity_sum(a, b)],
            claimed_count: 1,
        });
    }
    let fam_a = crate::pairing::greedy_pairs(a)?;
    let fam_b = crate::pairing::greedy_pairs(b)?;
    let alignment = align_b(&fam_a, &fam_b)?;
    certificate_from_alignment(a, b, alignment)
}

/// Assembles and checks a certificate from an explicit alignment.
pub(crate) fn certificate_from_alignment(
    a: &DistinctTuple<Rational>,
    b: &DistinctTuple<Rational>,
    alignment: Alignment,
) -> Result<WitnessCertificate<Rational>> {
    let wf = witness_family(&alignment.s, DEFAULT_WITNESS_CAP)?;
    // S(a, b; sigma . tau_T) = S(a, b; sigma) - sum_{p in T} s(p): the
    // transpositions are disjoint, so the difference identity applies
    // termwise. Verification recomputes the sums without this shortcut.
    let base = twisted_sum(a, b, &alignment.sigma)?;
    let sums: Vec<Rational> = wf
        .sums
        .iter()
        .map(|fam_sum| base.sub(fam_sum))
        .collect();
    check_distinct_sums(&sums)?;
    let transpositions: Vec<(usize, usize)> = alignment
        .transpositions
        .iter()
        .map(|&(j, k)| (j.min(k), j.max(k)))
        .collect();
    let claimed_count = wf.members.len() as u64;
    Ok(WitnessCertificate {
        relabeling: alignment.sigma,
        transpositions,
        s: alignment.s,
        family: wf.members,
        sums,
        claimed_count,
    })
}

/// Why a certificate failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyFailure {
    LengthMismatch,
    TranspositionOutOfRange { position: usize },
    OverlappingTranspositions { position: usize },
    ShapeMismatch,
    BadFamilyMember { member: usize },
    CountMismatch,
    SumMismatch { member: usize },
    DuplicateSum { first: usize, second: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::LengthMismatch => write!(f, "tuple and relabeling lengths disagree"),
            VerifyFailure::TranspositionOutOfRange { position } => {
                write!(f, "transposition {position} out of range")
            }
            VerifyFailure::OverlappingTranspositions { position } => {
                write!(f, "transposition {position} overlaps an earlier one")
            }
            VerifyFailure::ShapeMismatch => {
                write!(f, "step values and transpositions have different lengths")
            }
            VerifyFailure::BadFamilyMember { member } => {
                write!(f, "family member {member} is not a strictly increasing index list")
            }
            VerifyFailure::CountMismatch => {
                write!(f, "claimed count disagrees with family and sum lengths")
            }
            VerifyFailure::SumMismatch { member } => {
                write!(f, "recomputed sum of member {member} differs from the certificate")
            }
            VerifyFailure::DuplicateSum { first, second } => {
                write!(f, "members {first} and {second} produce the same sum")
            }
        }
    }
}

/// Verification verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<VerifyFailure>,
}

impl VerifyReport {
    fn fail(reason: VerifyFailure) -> Self {
        VerifyReport {
            valid: false,
            reason: Some(reason),
        }
    }
}

/// Checks a certificate against the tuples from scratch: every claimed sum
/// is recomputed by composing the permutation and walking the tuples, and
/// pairwise distinctness is re-checked. Never errors; malformed
/// certificates yield `valid = false` with a reason.
pub fn verify_certificate<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
    cert: &WitnessCertificate<T>,
) -> VerifyReport {
    let n = a.n();
    if b.n() != n || cert.relabeling.n() != n {
        return VerifyReport::fail(VerifyFailure::LengthMismatch);
    }
    let mut touched = vec![false; n];
    for (position, &(j, k)) in cert.transpositions.iter().enumerate() {
        if j >= n || k >= n {
            return VerifyReport::fail(VerifyFailure::TranspositionOutOfRange { position });
        }
        if j == k || touched[j] || touched[k] {
            return VerifyReport::fail(VerifyFailure::OverlappingTranspositions { position });
        }
        touched[j] = true;
        touched[k] = true;
    }
    if cert.s.len() != cert.transpositions.len() {
        return VerifyReport::fail(VerifyFailure::ShapeMismatch);
    }
    if cert.family.len() != cert.sums.len() || cert.claimed_count != cert.family.len() as u64 {
        return VerifyReport::fail(VerifyFailure::CountMismatch);
    }
    for (member, indices) in cert.family.iter().enumerate() {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices
            .iter()
            .all(|&i| (i as usize) < cert.transpositions.len());
        if !increasing || !in_range {
            return VerifyReport::fail(VerifyFailure::BadFamilyMember { member });
        }
    }

    let sigma = &cert.relabeling;
    for (member, indices) in cert.family.iter().enumerate() {
        let mut tau: Vec<usize> = (0..n).collect();
        for &i in indices {
            let (j, k) = cert.transpositions[i as usize];
            tau.swap(j, k);
        }
        let mut acc = T::zero();
        for i in 0..n {
            acc = acc.add_ref(&a.get(i).mul_ref(b.get(sigma.apply(tau[i]))));
        }
        if &acc != &cert.sums[member] {
            return VerifyReport::fail(VerifyFailure::SumMismatch { member });
        }
    }

    let mut idx: Vec<usize> = (0..cert.sums.len()).collect();
    idx.sort_by(|&i, &j| cert.sums[i].cmp(&cert.sums[j]));
    for w in idx.windows(2) {
        if cert.sums[w[0]] == cert.sums[w[1]] {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return VerifyReport::fail(VerifyFailure::DuplicateSum { first, second });
        }
    }
    VerifyReport {
        valid: true,
        reason: None,
    }
}

/// The trivial-bound walk: a chain of `C(n,2) + 1` permutations from the
/// aligned order to the anti-aligned order, each step an adjacent-rank swap
/// that strictly decreases the twisted sum. Witnesses the elementary lower
/// bound `n(n-1)/2 + 1` on the support size of any pair of distinct tuples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BubbleWalk<T> {
    pub perms: Vec<Permutation>,
    /// Strictly decreasing twisted sums, one per permutation.
    pub sums: Vec<T>,
}

pub fn bubble_walk<T: Scalar>(
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
) -> Result<BubbleWalk<T>> {
    crate::support::check_lengths(a, b)?;
    let n = a.n();
    let asort = a.sorted_indices();
    let bsort = b.sorted_indices();
    // c[p] = rank of the b-entry currently matched with the p-th smallest
    // a-entry. Start aligned (identity ranks), end fully reversed.
    let mut c: Vec<usize> = (0..n).collect();
    let mut perms = Vec::with_capacity(n * (n - 1) / 2 + 1);
    let mut sums = Vec::with_capacity(perms.capacity());

    let record = |c: &[usize], perms: &mut Vec<Permutation>, sums: &mut Vec<T>| -> Result<()> {
        let mut map = vec![0; n];
        for p in 0..n {
            map[asort[p]] = bsort[c[p]];
        }
        let pi = Permutation::new(map)?;
        let sum = twisted_sum(a, b, &pi)?;
        if let Some(prev) = sums.last() {
            if sum >= *prev {
                return Err(Error::Invariant(
                    "bubble walk sum failed to decrease".into(),
                ));
            }
        }
        perms.push(pi);
        sums.push(sum);
        Ok(())
    };

    record(&c, &mut perms, &mut sums)?;
    for round in 0..n.saturating_sub(1) {
        // Bubble the largest remaining rank from the back to position
        // `round`; each swap pairs a larger b-rank with a smaller a-rank.
        for i in (round..n - 1).rev() {
            debug_assert!(c[i] < c[i + 1]);
            c.swap(i, i + 1);
            record(&c, &mut perms, &mut sums)?;
        }
    }
    debug_assert_eq!(perms.len(), n * (n - 1) / 2 + 1);
    Ok(BubbleWalk { perms, sums })
}

/// Built-in positive sequences for threshold exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceFamily {
    /// `s(i) = i^2`, the consecutive-integers case.
    Squares,
    /// `s(i) = 4^(i-1)`, both tuples geometric.
    Geometric,
    /// `s(i) = i^3`, one linear and one quadratic tuple.
    Mixed,
}

impl SequenceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceFamily::Squares => "squares",
            SequenceFamily::Geometric => "geometric",
            SequenceFamily::Mixed => "mixed",
        }
    }

    fn cap(&self) -> usize {
        match self {
            // Geometric terms have ~0.6 digits per index; keep the
            // quadratic-cost prefix sums affordable.
            SequenceFamily::Geometric => 4096,
            _ => 1_000_000,
        }
    }

    /// The first `m` values of the sequence.
    pub fn values(&self, m: usize) -> Result<Vec<Rational>> {
        if m > self.cap() {
            return Err(Error::TooLarge {
                what: "sequence length",
                size: m as u64,
                cap: self.cap() as u64,
            });
        }
        let out = match self {
            SequenceFamily::Squares => (1..=m as i64)
                .map(|i| Rational::from_int(i * i))
                .collect(),
            SequenceFamily::Mixed => (1..=m as i64)
                .map(|i| Rational::from_int(i * i * i))
                .collect(),
            SequenceFamily::Geometric => {
                let mut term = BigInt::one();
                let mut out = Vec::with_capacity(m);
                for _ in 0..m {
                    out.push(Rational::from_bigint(term.clone()));
                    term *= 4;
                }
                out
            }
        };
        Ok(out)
    }
}

impl std::str::FromStr for SequenceFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squares" => Ok(SequenceFamily::Squares),
            "geometric" => Ok(SequenceFamily::Geometric),
            "mixed" => Ok(SequenceFamily::Mixed),
            other => Err(Error::InvalidParameter(format!(
                "unknown sequence family {other:?} (expected squares, geometric, or mixed)"
            ))),
        }
    }
}

/// One row of a threshold exploration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TExploration {
    pub family: &'static str,
    pub m: usize,
    pub t_value: usize,
    /// The cubic-root prediction `(3 m^2)^(1/3)`.
    pub predicted: f64,
    pub ratio: f64,
}

/// Tabulates the empirical threshold against the cubic-root prediction for
/// a built-in sequence family at several lengths.
pub fn explore_t_asymptotics(
    family: SequenceFamily,
    ms: &[usize],
) -> Result<Vec<TExploration>> {
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        if m == 0 {
            return Err(Error::EmptyInput);
        }
        let values = family.values(m)?;
        let t_value = empirical_t(&values)?;
        let predicted = (3.0 * (m as f64) * (m as f64)).cbrt();
        rows.push(TExploration {
            family: family.name(),
            m,
            t_value,
            predicted,
            ratio: t_value as f64 / predicted,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuple::first_n_integers;

    fn squares(m: usize) -> Vec<i64> {
        (1..=m as i64).map(|i| i * i).collect()
    }

    #[test]
    fn threshold_chain_for_squares() {
        // Hand-derived: P(t) = t(t+1)(2t+1)/6 against s(q) = q^2.
        let chain = t_chain(&squares(10)).unwrap();
        assert_eq!(chain, vec![0, 1, 2, 3, 3, 4, 4, 5, 5, 6]);
        assert_eq!(empirical_t(&squares(100)).unwrap(), 30);
        assert_eq!(empirical_t(&squares(1000)).unwrap(), 143);
        assert_eq!(empirical_t(&squares(500)).unwrap(), 90);
    }

    #[test]
    fn threshold_rejects_bad_input() {
        assert!(matches!(
            empirical_t::<i64>(&[]),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            empirical_t(&[1i64, 0, 2]),
            Err(Error::NonPositiveValue(1))
        ));
    }

    #[test]
    fn family_sizes_for_squares() {
        let plan = family_plan(&squares(10)).unwrap();
        assert_eq!(
            plan.sizes,
            vec![1, 2, 4, 8, 16, 24, 40, 56, 80, 104, 144]
        );
        assert_eq!(plan.family_size(), 144);
    }

    #[test]
    fn rapidly_growing_values_fill_the_power_set() {
        // Powers of two: every threshold is q-1 and F(m) is everything.
        let values: Vec<i64> = (0..10).map(|i| 1i64 << i).collect();
        let plan = family_plan(&values).unwrap();
        assert_eq!(plan.t_chain, (0..10).collect::<Vec<_>>());
        assert_eq!(plan.family_size(), 1024);
        let wf = witness_family(&values, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(wf.members.len(), 1024);
    }

    #[test]
    fn family_sums_matches_materialized_family() {
        for m in [1, 2, 3, 5, 8, 12, 20] {
            let s = squares(m);
            let fs = family_sums(&s, DEFAULT_FAMILY_CAP).unwrap();
            let wf = witness_family(&s, DEFAULT_WITNESS_CAP).unwrap();
            let mut direct = wf.sums.clone();
            direct.sort();
            assert_eq!(fs.sums, direct, "m={m}");
            assert_eq!(fs.observed_sizes, fs.plan.sizes, "m={m}");
            for w in fs.sums.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn family_members_are_valid_subsets() {
        let s = squares(9);
        let wf = witness_family(&s, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(wf.members[0], Vec::<u32>::new());
        for member in &wf.members {
            assert!(member.windows(2).all(|w| w[0] < w[1]));
            assert!(member.iter().all(|&i| (i as usize) < s.len()));
        }
        // No duplicate members.
        let set: std::collections::BTreeSet<_> = wf.members.iter().collect();
        assert_eq!(set.len(), wf.members.len());
    }

    #[test]
    fn caps_are_enforced() {
        let values: Vec<i64> = (0..30).map(|i| 1i64 << i).collect();
        assert!(matches!(
            witness_family(&values, 1000),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            family_sums(&values, 1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn alignment_of_identical_ladders() {
        let a = first_n_integers(7).unwrap();
        let fam_a = crate::pairing::greedy_pairs(&a).unwrap();
        let alignment = align_b(&fam_a, &fam_a).unwrap();
        // Pairs (0,1) and (2,4) map onto themselves; everyone else fixed.
        assert!(alignment.sigma.is_identity());
        assert_eq!(
            alignment.s,
            vec![Rational::from_int(1), Rational::from_int(4)]
        );
    }

    #[test]
    fn certificate_round_trip_and_verification() {
        let a = first_n_integers(8).unwrap();
        let b = first_n_integers(8).unwrap();
        let cert = build_certificate(&a, &b).unwrap();
        assert_eq!(cert.claimed_count as usize, cert.family.len());
        assert!(cert.claimed_count >= 4);
        let report = verify_certificate(&a, &b, &cert);
        assert!(report.valid, "reason: {:?}", report.reason);

        // Serde round trip preserves validity.
        let json = serde_json::to_string(&cert).unwrap();
        let back: WitnessCertificate<Rational> = serde_json::from_str(&json).unwrap();
        assert!(verify_certificate(&a, &b, &back).valid);
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let a = first_n_integers(6).unwrap();
        let cert = build_certificate(&a, &a).unwrap();

        let mut bad = cert.clone();
        bad.sums[0] = bad.sums[0].add(&Rational::one());
        let report = verify_certificate(&a, &a, &bad);
        assert_eq!(report.reason, Some(VerifyFailure::SumMismatch { member: 0 }));

        let mut bad = cert.clone();
        bad.claimed_count += 1;
        assert_eq!(
            verify_certificate(&a, &a, &bad).reason,
            Some(VerifyFailure::CountMismatch)
        );

        let mut bad = cert.clone();
        if bad.family.len() >= 2 {
            bad.family[1] = bad.family[0].clone();
            bad.sums[1] = bad.sums[0].clone();
            let report = verify_certificate(&a, &a, &bad);
            assert!(matches!(
                report.reason,
                Some(VerifyFailure::DuplicateSum { .. })
            ));
        }

        let mut bad = cert.clone();
        bad.transpositions[0] = (0, 99);
        assert_eq!(
            verify_certificate(&a, &a, &bad).reason,
            Some(VerifyFailure::TranspositionOutOfRange { position: 0 })
        );

        let mut bad = cert;
        bad.family[0] = vec![99];
        assert_eq!(
            verify_certificate(&a, &a, &bad).reason,
            Some(VerifyFailure::BadFamilyMember { member: 0 })
        );
    }

    #[test]
    fn single_entry_certificate() {
        let a = DistinctTuple::new(vec![Rational::from_int(5)]).unwrap();
        let cert = build_certificate(&a, &a).unwrap();
        assert_eq!(cert.claimed_count, 1);
        assert_eq!(cert.sums, vec![Rational::from_int(25)]);
        assert!(verify_certificate(&a, &a, &cert).valid);
    }

    #[test]
    fn bubble_walk_on_small_ladder() {
        let a = first_n_integers(3).unwrap();
        let walk = bubble_walk(&a, &a).unwrap();
        let want: Vec<Rational> = [14, 13, 11, 10]
            .iter()
            .map(|&v| Rational::from_int(v))
            .collect();
        assert_eq!(walk.sums, want);
        assert_eq!(walk.perms.len(), 4);
        assert!(walk.perms[0].is_identity());
    }

    #[test]
    fn bubble_walk_counts_and_monotonicity() {
        let a = DistinctTuple::new(
            [3, -1, 7, 0, 12]
                .iter()
                .map(|&v| Rational::from_int(v))
                .collect(),
        )
        .unwrap();
        let b = DistinctTuple::new(
            [5, 2, -4, 9, 1].iter().map(|&v| Rational::from_int(v)).collect(),
        )
        .unwrap();
        let walk = bubble_walk(&a, &b).unwrap();
        assert_eq!(walk.sums.len(), 5 * 4 / 2 + 1);
        for w in walk.sums.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn exploration_families() {
        let rows = explore_t_asymptotics(SequenceFamily::Squares, &[100, 1000]).unwrap();
        assert_eq!(rows[0].t_value, 30);
        assert_eq!(rows[1].t_value, 143);
        assert!((rows[1].ratio - 1.0).abs() < 0.05);

        // Geometric growth drives the threshold to its maximum m-1.
        let rows = explore_t_asymptotics(SequenceFamily::Geometric, &[40]).unwrap();
        assert_eq!(rows[0].t_value, 39);

        // Cubic values scale like m^(3/4) instead.
        let rows = explore_t_asymptotics(SequenceFamily::Mixed, &[100]).unwrap();
        assert_eq!(rows[0].t_value, 44);
    }
}

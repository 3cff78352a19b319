//! Exact counting, bounds, and certificates for the values of the
//! permutation-twisted dot product
//!
//! ```text
//! S(a, b; pi) = a_0 b_{pi(0)} + a_1 b_{pi(1)} + ... + a_{n-1} b_{pi(n-1)}
//! ```
//!
//! over all permutations `pi` of `{0, ..., n-1}`, where `a` and `b` are
//! tuples of pairwise distinct rationals or Gaussian rationals.
//!
//! The crate is organized around three ways of pinning down how many
//! distinct values `S` takes:
//!
//! - **Exact enumeration** ([`support`]): walk all `n!` permutations with
//!   exact arithmetic; feasible for small `n` and the ground truth
//!   everything else is tested against.
//! - **Certified lower bounds** ([`pairing`], [`witness`],
//!   [`complex_case`]): greedy difference pairing plus a recursive
//!   subset-sum family produce an explicit list of permutations with
//!   pairwise distinct sums, packaged as a machine-checkable certificate
//!   that an independent verifier replays from scratch.
//! - **Structural bounds** ([`geometry`], [`incidence`]): a dimension
//!   recurrence for subset sums of points in general position, and a line
//!   census dichotomy that routes planar (Gaussian) inputs either to a
//!   collinear reduction or to a spread anchor construction.
//!
//! [`mc`] adds seeded, thread-count-independent Monte Carlo estimates of
//! the value distribution, and [`io`] plus the `tsum` binary wire
//! everything to JSON files.
//!
//! ```
//! use twisted_sums::{DistinctTuple, Rational};
//! use twisted_sums::support::exact_support;
//! use twisted_sums::witness::{build_certificate, bubble_walk, verify_certificate};
//!
//! let a = twisted_sums::tuple::first_n_integers(6).unwrap();
//!
//! // Ground truth by enumeration: how many values does S take?
//! let support = exact_support(&a, &a, 8).unwrap();
//! assert_eq!(support.total_permutations, 720);
//!
//! // A strictly decreasing walk shows at least C(6,2) + 1 = 16 values.
//! let walk = bubble_walk(&a, &a).unwrap();
//! assert_eq!(walk.sums.len(), 16);
//! assert!(support.distinct_count >= 16);
//!
//! // An independently checkable certificate for a (smaller) family.
//! let cert = build_certificate(&a, &a).unwrap();
//! assert!(verify_certificate(&a, &a, &cert).valid);
//! assert!(cert.claimed_count <= support.distinct_count);
//! ```

pub mod complex_case;
pub mod error;
pub mod geometry;
pub mod incidence;
pub mod io;
pub mod mc;
pub mod pairing;
pub mod perm;
pub mod scalar;
pub mod subsets;
pub mod support;
pub mod tuple;
pub mod witness;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use scalar::{GaussianRational, Rational, RationalVector, Scalar};
pub use tuple::DistinctTuple;

// The book's code blocks double as doc-tests so the guide can never drift
// from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(exact_arithmetic, "../../../book/src/exact-arithmetic.md");
    chapter!(supports, "../../../book/src/supports.md");
    chapter!(pairing, "../../../book/src/pairing.md");
    chapter!(witnesses, "../../../book/src/witnesses.md");
    chapter!(general_position, "../../../book/src/general-position.md");
    chapter!(complex_tuples, "../../../book/src/complex-tuples.md");
    chapter!(monte_carlo, "../../../book/src/monte-carlo.md");
    chapter!(cli, "../../../book/src/cli.md");
}

//! Exact scalar arithmetic: arbitrary-precision rationals, Gaussian
//! rationals, and small rational vectors.
//!
//! All certified computations in this crate run on these types; floating
//! point appears only in diagnostic report fields. Rationals are kept in
//! canonical reduced form (positive denominator, gcd 1) by construction, so
//! structural equality coincides with numeric equality and `Ord`/`Hash` are
//! safe to use on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number.
///
/// Thin wrapper over [`num_rational::BigRational`] fixing a canonical form
/// and a serialization grammar: the string `p` or `p/q` with `p` a signed
/// decimal integer and `q` a positive decimal integer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer/denom`, rejecting a zero denominator.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Sign as -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }

    pub fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    /// Exact division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Nearest double, for diagnostic output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p` or `p/q`. Surrounding whitespace is ignored; anything else
    /// (empty numerator, signs on the denominator, inner spaces) is rejected.
    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let bad = || Error::MalformedNumber(text.to_string());
        let (num_part, den_part) = match trimmed.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (trimmed, None),
        };
        let numer = parse_signed_int(num_part).ok_or_else(bad)?;
        let denom = match den_part {
            Some(d) => {
                let den = parse_unsigned_int(d).ok_or_else(bad)?;
                if den.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                den
            }
            None => BigInt::one(),
        };
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

fn parse_signed_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn parse_unsigned_int(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Total order on rationals by numeric value.
pub fn compare_total(x: &Rational, y: &Rational) -> Ordering {
    x.cmp(y)
}

/// A Gaussian rational `re + im*i`.
///
/// The derived `Ord` is lexicographic on `(re, im)`. It is not compatible
/// with multiplication; it exists so sets and reports have one deterministic
/// order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_re(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_int(re),
            im: Rational::from_int(im),
        }
    }

    pub fn zero() -> Self {
        GaussianRational::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }

    pub fn i_unit() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `re^2 + im^2`, a nonnegative rational.
    pub fn norm_sqr(&self) -> Rational {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        let inv_n = n.checked_recip()?;
        Some(GaussianRational {
            re: self.re.mul(&inv_n),
            im: self.im.neg().mul(&inv_n),
        })
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact test for `Im(z * conj(w))`, the cross term deciding whether `z` is
/// a real multiple of `w`.
pub fn real_cross(z: &GaussianRational, w: &GaussianRational) -> Rational {
    z.im.mul(&w.re).sub(&z.re.mul(&w.im))
}

/// Whether `z = t*w` for some real `t` (zero counts as a real multiple).
pub fn is_real_multiple(z: &GaussianRational, w: &GaussianRational) -> bool {
    real_cross(z, w).is_zero()
}

/// A point of `Q^d`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Componentwise sum. Panics on dimension mismatch; callers operate
    /// inside a validated point set where dimensions agree.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RationalVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(x, y)| x.add(y))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RationalVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(x, y)| x.sub(y))
                .collect(),
        )
    }

    pub fn scale(&self, t: &Rational) -> Self {
        RationalVector(self.0.iter().map(|x| x.mul(t)).collect())
    }

    pub fn dot(&self, rhs: &Self) -> Rational {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        let mut acc = Rational::zero();
        for (x, y) in self.0.iter().zip(&rhs.0) {
            acc = acc.add(&x.mul(y));
        }
        acc
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Values that can be accumulated into subset sums.
///
/// Contract beyond the bounds: `Ord` must be translation-invariant, meaning
/// `x < y` implies `x.add_ref(c) < y.add_ref(c)` for every `c`. This holds
/// for integers, rationals, and the lexicographic orders on Gaussian
/// rationals and vectors, and the merge-based subset-sum enumeration relies
/// on it.
pub trait AdditiveValue: Clone + Eq + Ord + Send + Sync + fmt::Debug {
    /// The zero of the same shape as `self` (same dimension for vectors).
    fn zero_like(&self) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
}

/// Real values usable as witness step sizes: ordered, with a meaningful
/// notion of "strictly positive".
pub trait WitnessValue: AdditiveValue {
    fn is_strictly_positive(&self) -> bool;
}

/// Kind tag for the two scalar domains handled by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Rational,
    Gaussian,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Rational => write!(f, "rational"),
            ValueKind::Gaussian => write!(f, "gaussian"),
        }
    }
}

/// Full scalar interface for tuple entries: ring operations plus hashing,
/// display, and serde, so supports can be enumerated, reported, and stored.
pub trait Scalar:
    AdditiveValue + std::hash::Hash + fmt::Display + Serialize + DeserializeOwned + 'static
{
    const KIND: ValueKind;
    fn zero() -> Self;
    fn one() -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn is_zero_value(&self) -> bool;
}

impl AdditiveValue for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
}

impl WitnessValue for Rational {
    fn is_strictly_positive(&self) -> bool {
        self.is_positive()
    }
}

impl Scalar for Rational {
    const KIND: ValueKind = ValueKind::Rational;
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl AdditiveValue for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
}

impl Scalar for GaussianRational {
    const KIND: ValueKind = ValueKind::Gaussian;
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl AdditiveValue for RationalVector {
    fn zero_like(&self) -> Self {
        RationalVector::zeros(self.dim())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
}

macro_rules! impl_int_values {
    ($($t:ty),*) => {$(
        impl AdditiveValue for $t {
            fn zero_like(&self) -> Self { 0 }
            fn add_ref(&self, rhs: &Self) -> Self {
                self.checked_add(*rhs).expect("integer overflow in exact sum")
            }
            fn sub_ref(&self, rhs: &Self) -> Self {
                self.checked_sub(*rhs).expect("integer overflow in exact sum")
            }
        }
        impl WitnessValue for $t {
            fn is_strictly_positive(&self) -> bool { *self > 0 }
        }
    )*};
}

impl_int_values!(i64, i128);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        for (text, want) in [
            ("3/4", "3/4"),
            ("-3/4", "-3/4"),
            ("6/8", "3/4"),
            ("-6/8", "-3/4"),
            ("0/5", "0"),
            ("7", "7"),
            ("-7", "-7"),
            ("  12/9 ", "4/3"),
        ] {
            assert_eq!(r(text).to_string(), want, "input {text:?}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["", "1/", "/2", "1//2", "a", "1/-2", "+3", "1.5", "1 /2", "--4"] {
            let got = text.parse::<Rational>();
            assert!(
                matches!(got, Err(Error::MalformedNumber(_))),
                "input {text:?} gave {got:?}"
            );
        }
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn canonical_form_is_reduced_with_positive_denominator() {
        let x = Rational::new(BigInt::from(4), BigInt::from(-6)).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert!(Rational::new(BigInt::from(1), BigInt::from(0)).is_err());
    }

    #[test]
    fn compare_total_orders_by_value() {
        assert_eq!(compare_total(&r("1/3"), &r("1/2")), Ordering::Less);
        assert_eq!(compare_total(&r("2/4"), &r("1/2")), Ordering::Equal);
        assert_eq!(compare_total(&r("-1/3"), &r("-1/2")), Ordering::Greater);
    }

    #[test]
    fn gaussian_arithmetic_basics() {
        let z = GaussianRational::from_ints(1, 2);
        let w = GaussianRational::from_ints(3, -1);
        let p = z.mul(&w);
        assert_eq!(p, GaussianRational::from_ints(5, 5));
        assert_eq!(z.norm_sqr(), r("5"));
        assert_eq!(z.conj(), GaussianRational::from_ints(1, -2));
        let inv = z.checked_inv().unwrap();
        assert_eq!(z.mul(&inv), GaussianRational::one());
        assert!(GaussianRational::zero().checked_inv().is_none());
    }

    #[test]
    fn real_multiple_test_is_exact() {
        let w = GaussianRational::from_ints(2, 4);
        let z = GaussianRational::new(r("1"), r("2"));
        assert!(is_real_multiple(&z, &w));
        let y = GaussianRational::from_ints(1, 3);
        assert!(!is_real_multiple(&y, &w));
        assert!(is_real_multiple(&GaussianRational::zero(), &w));
    }

    #[test]
    fn gaussian_display_forms() {
        assert_eq!(GaussianRational::from_ints(3, 0).to_string(), "3");
        assert_eq!(GaussianRational::from_ints(0, -2).to_string(), "-2i");
        assert_eq!(GaussianRational::from_ints(1, 2).to_string(), "1+2i");
        assert_eq!(
            GaussianRational::new(r("1/2"), r("-1/3")).to_string(),
            "1/2-1/3i"
        );
    }

    #[test]
    fn vector_operations() {
        let u = RationalVector::new(vec![r("1"), r("2")]);
        let v = RationalVector::new(vec![r("3"), r("-1")]);
        assert_eq!(u.dot(&v), r("1"));
        assert_eq!(u.add(&v), RationalVector::new(vec![r("4"), r("1")]));
        assert_eq!(u.sub(&v), RationalVector::new(vec![r("-2"), r("3")]));
        assert!(RationalVector::zeros(3).is_zero());
    }

    #[test]
    fn serde_round_trips() {
        let x = r("-22/7");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"-22/7\"");
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);

        let z = GaussianRational::new(r("1/2"), r("-3"));
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, "{\"re\":\"1/2\",\"im\":\"-3\"}");
        assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), z);

        let v = RationalVector::new(vec![r("1"), r("2/3")]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "[\"1\",\"2/3\"]");
        assert_eq!(serde_json::from_str::<RationalVector>(&json).unwrap(), v);
    }

    proptest! {
        #[test]
        fn prop_rational_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
            let x = Rational::new(BigInt::from(n), BigInt::from(d)).unwrap();
            let back: Rational = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn prop_field_laws(
            an in -100i64..100, ad in 1i64..30,
            bn in -100i64..100, bd in 1i64..30,
        ) {
            let a = Rational::new(BigInt::from(an), BigInt::from(ad)).unwrap();
            let b = Rational::new(BigInt::from(bn), BigInt::from(bd)).unwrap();
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            prop_assert_eq!(a.add(&b), b.add(&a));
            if !b.is_zero() {
                let q = a.checked_div(&b).unwrap();
                prop_assert_eq!(q.mul(&b), a.clone());
            }
        }

        #[test]
        fn prop_order_translation_invariant(
            an in -100i64..100, bn in -100i64..100, cn in -100i64..100, d in 1i64..30,
        ) {
            let a = Rational::new(BigInt::from(an), BigInt::from(d)).unwrap();
            let b = Rational::new(BigInt::from(bn), BigInt::from(d)).unwrap();
            let c = Rational::from_int(cn);
            prop_assert_eq!(a.cmp(&b), a.add(&c).cmp(&b.add(&c)));
        }

        #[test]
        fn prop_gaussian_mul_matches_norm(
            ar in -20i64..20, ai in -20i64..20,
            br in -20i64..20, bi in -20i64..20,
        ) {
            let z = GaussianRational::from_ints(ar, ai);
            let w = GaussianRational::from_ints(br, bi);
            prop_assert_eq!(z.mul(&w).norm_sqr(), z.norm_sqr().mul(&w.norm_sqr()));
        }
    }
}

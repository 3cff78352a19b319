//! Line censuses over planar point sets with Gaussian rational
//! coordinates, and the dichotomy that routes the complex construction.
//!
//! Every pair of distinct points spans a line, canonicalized as integer
//! coefficients `a x + b y = c` with `gcd(a, b, c) = 1` and the first
//! nonzero of `(a, b)` positive, so equal lines collide structurally. The
//! dichotomy inspects the census: either some line carries at least `tau`
//! points (the collinear case) or no line does, in which case the points of
//! at-least-median line incidence serve as anchors for pair selection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// Largest point count accepted by the census (the map is quadratic).
pub const MAX_CENSUS_POINTS: usize = 4096;

/// A line `a x + b y = c` in canonical integer form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineKey {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl LineKey {
    /// Direction vector `(b, -a)` of the line, as a Gaussian rational.
    pub fn direction(&self) -> GaussianRational {
        GaussianRational::new(
            crate::scalar::Rational::from_bigint(self.b.clone()),
            crate::scalar::Rational::from_bigint(-self.a.clone()),
        )
    }
}

impl fmt::Display for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x+{}y={}", self.a, self.b, self.c)
    }
}

impl fmt::Debug for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for LineKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LineKey", 3)?;
        s.serialize_field("a", &self.a.to_string())?;
        s.serialize_field("b", &self.b.to_string())?;
        s.serialize_field("c", &self.c.to_string())?;
        s.end()
    }
}

/// The canonical line through two distinct points of the plane, where the
/// complex number `x + y i` stands for the point `(x, y)`.
pub fn line_through(p: &GaussianRational, q: &GaussianRational) -> Result<LineKey> {
    if p == q {
        return Err(Error::InvalidParameter(
            "a line needs two distinct points".into(),
        ));
    }
    // Normal (dy, -dx), offset through p; clear denominators, reduce, fix sign.
    let dx = q.re.sub(&p.re);
    let dy = q.im.sub(&p.im);
    let a = dy.clone();
    let b = dx.neg();
    let c = a.mul(&p.re).add(&b.mul(&p.im));

    let mut lcm = BigInt::from(1);
    for r in [&a, &b, &c] {
        lcm = lcm.lcm(r.denom());
    }
    let mut ia = a.numer() * (&lcm / a.denom());
    let mut ib = b.numer() * (&lcm / b.denom());
    let mut ic = c.numer() * (&lcm / c.denom());
    let gcd = ia.gcd(&ib).gcd(&ic);
    if !gcd.is_zero() {
        ia /= &gcd;
        ib /= &gcd;
        ic /= &gcd;
    }
    let lead_negative = if ia.is_zero() {
        ib.is_negative()
    } else {
        ia.is_negative()
    };
    if lead_negative {
        ia = -ia;
        ib = -ib;
        ic = -ic;
    }
    Ok(LineKey {
        a: ia,
        b: ib,
        c: ic,
    })
}

/// One line of the census with the points it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineEntry {
    pub key: LineKey,
    /// Sorted indices of the points on this line (always at least two).
    pub points: Vec<usize>,
}

/// Full line census of a planar point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineStats {
    pub n: usize,
    pub line_count: u64,
    /// Largest number of collinear points; `n` itself when `n < 2`.
    pub max_collinear: usize,
    /// The (smallest) line achieving `max_collinear`, absent when `n < 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_line: Option<LineKey>,
    pub best_line_points: Vec<usize>,
    /// For each point, the number of census lines through it.
    pub incidence: Vec<u64>,
    /// All lines, sorted by key.
    pub lines: Vec<LineEntry>,
}

/// Builds the census over all point pairs. Points must be pairwise
/// distinct.
pub fn line_stats(points: &[GaussianRational]) -> Result<LineStats> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > MAX_CENSUS_POINTS {
        return Err(Error::TooLarge {
            what: "line census point count",
            size: n as u64,
            cap: MAX_CENSUS_POINTS as u64,
        });
    }
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by(|&i, &j| points[i].cmp(&points[j]));
    for w in sorted.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::DuplicatePoints(a, b));
        }
    }

    let mut map: BTreeMap<LineKey, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let key = line_through(&points[i], &points[j])?;
            let entry = map.entry(key).or_default();
            entry.insert(i);
            entry.insert(j);
        }
    }

    let mut incidence = vec![0u64; n];
    let mut best: Option<(&LineKey, usize)> = None;
    for (key, pts) in &map {
        for &i in pts {
            incidence[i] += 1;
        }
        match best {
            Some((_, size)) if pts.len() <= size => {}
            _ => best = Some((key, pts.len())),
        }
    }
    let (best_line, max_collinear) = match best {
        Some((key, size)) => (Some(key.clone()), size),
        None => (None, n),
    };
    let best_line_points = best_line
        .as_ref()
        .map(|key| map[key].iter().copied().collect())
        .unwrap_or_default();
    let lines = map
        .into_iter()
        .map(|(key, pts)| LineEntry {
            key,
            points: pts.into_iter().collect(),
        })
        .collect::<Vec<_>>();
    Ok(LineStats {
        n,
        line_count: lines.len() as u64,
        max_collinear,
        best_line,
        best_line_points,
        incidence,
        lines,
    })
}

/// Default collinearity threshold: `max(4, ceil(n / 4))`.
pub fn default_tau(n: usize) -> usize {
    4.max(n.div_ceil(4))
}

/// The two branches of the dichotomy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum BeckCase {
    /// Some line carries at least `tau` points.
    Collinear { line: LineKey, points: Vec<usize> },
    /// No heavy line; anchors are the points whose incidence reaches the
    /// ceiling of the median incidence.
    Spread { threshold: u64, anchors: Vec<usize> },
}

/// Applies the dichotomy at threshold `tau`.
pub fn beck_dichotomy(stats: &LineStats, tau: usize) -> Result<BeckCase> {
    if tau < 2 {
        return Err(Error::InvalidParameter(
            "collinearity threshold must be at least 2".into(),
        ));
    }
    if stats.n >= 2 && stats.max_collinear >= tau {
        return Ok(BeckCase::Collinear {
            line: stats.best_line.clone().expect("census has lines for n >= 2"),
            points: stats.best_line_points.clone(),
        });
    }
    Ok(BeckCase::Spread {
        threshold: median_ceiling(&stats.incidence),
        anchors: spread_anchors(stats),
    })
}

/// Anchor pool of the spread case: points with incidence at least the
/// ceiling of the median.
pub(crate) fn spread_anchors(stats: &LineStats) -> Vec<usize> {
    let threshold = median_ceiling(&stats.incidence);
    (0..stats.n)
        .filter(|&i| stats.incidence[i] >= threshold)
        .collect()
}

fn median_ceiling(values: &[u64]) -> u64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        // Exact ceiling of the midpoint average.
        (sorted[n / 2 - 1] + sorted[n / 2]).div_ceil(2)
    }
}

/// Census plus dichotomy at a given threshold, bundled for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeckReport {
    pub n: usize,
    pub tau: usize,
    pub line_count: u64,
    pub max_collinear: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_line: Option<LineKey>,
    pub incidence: Vec<u64>,
    pub outcome: BeckCase,
}

/// Runs the census and the dichotomy in one step. `tau = None` uses
/// [`default_tau`].
pub fn beck_report(points: &[GaussianRational], tau: Option<usize>) -> Result<BeckReport> {
    let stats = line_stats(points)?;
    let tau = tau.unwrap_or_else(|| default_tau(stats.n));
    let outcome = beck_dichotomy(&stats, tau)?;
    Ok(BeckReport {
        n: stats.n,
        tau,
        line_count: stats.line_count,
        max_collinear: stats.max_collinear,
        best_line: stats.best_line,
        incidence: stats.incidence,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn canonical_line_keys() {
        // Same line from different point pairs and orders.
        let k1 = line_through(&g(0, 0), &g(2, 2)).unwrap();
        let k2 = line_through(&g(3, 3), &g(1, 1)).unwrap();
        assert_eq!(k1, k2);
        assert_eq!(k1.to_string(), "1x+-1y=0");

        // Vertical and horizontal lines.
        let v = line_through(&g(2, 0), &g(2, 5)).unwrap();
        assert_eq!(v.to_string(), "1x+0y=2");
        let h = line_through(&g(0, -1), &g(4, -1)).unwrap();
        assert_eq!(h.to_string(), "0x+1y=-1");

        // Fractional coordinates reduce to primitive integers.
        let half = GaussianRational::new(
            "1/2".parse().unwrap(),
            "0".parse().unwrap(),
        );
        let k = line_through(&half, &g(0, 1)).unwrap();
        assert_eq!(k.to_string(), "2x+1y=1");

        assert!(line_through(&g(1, 1), &g(1, 1)).is_err());
    }

    #[test]
    fn census_of_the_spec_quadruple() {
        // Points 0, 1, i, 2i: the imaginary axis carries three of them.
        let pts = [g(0, 0), g(1, 0), g(0, 1), g(0, 2)];
        let stats = line_stats(&pts).unwrap();
        assert_eq!(stats.line_count, 4);
        assert_eq!(stats.max_collinear, 3);
        assert_eq!(stats.best_line.as_ref().unwrap().to_string(), "1x+0y=0");
        assert_eq!(stats.best_line_points, vec![0, 2, 3]);
        assert_eq!(stats.incidence, vec![2, 3, 2, 2]);
    }

    #[test]
    fn dichotomy_cases() {
        let pts = [g(0, 0), g(1, 0), g(0, 1), g(0, 2)];
        let stats = line_stats(&pts).unwrap();
        // tau = 3 reaches the heavy line.
        match beck_dichotomy(&stats, 3).unwrap() {
            BeckCase::Collinear { points, .. } => assert_eq!(points, vec![0, 2, 3]),
            other => panic!("expected collinear case, got {other:?}"),
        }
        // tau = 4 (the default for n = 4) does not.
        assert_eq!(default_tau(4), 4);
        match beck_dichotomy(&stats, 4).unwrap() {
            BeckCase::Spread { threshold, anchors } => {
                assert_eq!(threshold, 2);
                assert_eq!(anchors, vec![0, 1, 2, 3]);
            }
            other => panic!("expected spread case, got {other:?}"),
        }
    }

    #[test]
    fn default_tau_values() {
        assert_eq!(default_tau(1), 4);
        assert_eq!(default_tau(16), 4);
        assert_eq!(default_tau(17), 5);
        assert_eq!(default_tau(100), 25);
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let pts = [g(1, 2), g(0, 0), g(1, 2)];
        assert!(matches!(
            line_stats(&pts),
            Err(Error::DuplicatePoints(0, 2))
        ));
    }

    #[test]
    fn single_point_census() {
        let stats = line_stats(&[g(5, -1)]).unwrap();
        assert_eq!(stats.line_count, 0);
        assert_eq!(stats.max_collinear, 1);
        assert!(stats.best_line.is_none());
        match beck_dichotomy(&stats, 4).unwrap() {
            BeckCase::Spread { anchors, .. } => assert_eq!(anchors, vec![0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn incidence_counts_lines_not_pairs() {
        // Five points on one line plus one off it: the collinear points sit
        // on 2 lines each (the heavy line and the spoke), the apex on 5.
        let mut pts: Vec<_> = (0..5).map(|x| g(x, 0)).collect();
        pts.push(g(0, 3));
        let stats = line_stats(&pts).unwrap();
        assert_eq!(stats.max_collinear, 5);
        assert_eq!(stats.incidence[5], 5);
        for i in 0..5 {
            assert_eq!(stats.incidence[i], 2);
        }
    }
}

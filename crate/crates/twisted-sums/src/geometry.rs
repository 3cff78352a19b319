//! General-position point sets in `Q^d` and the dimension-induction lower
//! bound on their distinct subset sums.
//!
//! A set of nonzero points is in general position when every `d`-subset is
//! linearly independent. The induction picks a direction `w*` minimizing
//! the number of point pairs whose difference is parallel to it, splits the
//! subset sums into those avoiding `w*` and those containing it, and
//! projects the rest onto the hyperplane `w*^perp`, which is again a
//! general-position set one dimension down. Running the recurrence on the
//! resulting sizes gives the closed-form bound; running it on the actual
//! sets gives a constructive bound at least as strong.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, RationalVector};

/// Ceiling on the number of `d`-subsets the validator will examine.
const GP_SUBSET_BUDGET: u128 = 2_000_000;

/// Recurrence tables refuse lengths beyond this.
const GP_RECURRENCE_MAX_M: usize = 1_000_000;

/// Traces are attached only while the node count stays readable.
const GP_TRACE_LIMIT: usize = 10_000;

/// A finite set of pairwise-distinct points of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<RationalVector>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<RationalVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&i, &j| points[i].cmp(&points[j]));
        for w in idx.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::DuplicatePoints(a, b));
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }
}

/// Outcome of a general-position check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PositionCheck {
    GeneralPosition,
    /// A witness: either a single zero point or a dependent `d`-subset,
    /// as sorted indices into the point list.
    Dependent { subset: Vec<usize> },
}

/// Checks every `d`-subset for linear independence (and every point for
/// being nonzero). Cost grows as `C(m, d)`; guarded by an internal budget.
pub fn check_general_position(set: &PointSet) -> Result<PositionCheck> {
    let d = set.dim();
    let m = set.len();
    for (i, p) in set.points().iter().enumerate() {
        if p.is_zero() {
            return Ok(PositionCheck::Dependent { subset: vec![i] });
        }
    }
    if m < d {
        return Ok(PositionCheck::GeneralPosition);
    }
    if binomial_u128(m, d) > GP_SUBSET_BUDGET {
        return Err(Error::TooLarge {
            what: "general-position subset count",
            size: u64::MAX,
            cap: GP_SUBSET_BUDGET as u64,
        });
    }
    let integral: Vec<Vec<BigInt>> = set.points().iter().map(primitive_integer).collect();
    let mut combo: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<Vec<BigInt>> = combo.iter().map(|&i| integral[i].clone()).collect();
        if det_bigint(rows).is_zero() {
            return Ok(PositionCheck::Dependent {
                subset: combo.clone(),
            });
        }
        // Advance to the next d-combination in lexicographic order: bump the
        // rightmost index that still has room, reset everything after it.
        match (0..d).rev().find(|&i| combo[i] < i + m - d) {
            None => return Ok(PositionCheck::GeneralPosition),
            Some(i) => {
                combo[i] += 1;
                for t in i + 1..d {
                    combo[t] = combo[t - 1] + 1;
                }
            }
        }
    }
}

/// A point set whose general position has been verified. Construction is
/// the only way to obtain one, so downstream operations cannot be fed
/// unvalidated data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GeneralPositionSet {
    inner: PointSet,
}

impl GeneralPositionSet {
    pub fn validate(set: PointSet) -> Result<Self> {
        match check_general_position(&set)? {
            PositionCheck::GeneralPosition => Ok(GeneralPositionSet { inner: set }),
            PositionCheck::Dependent { subset } => Err(Error::NotInGeneralPosition(subset)),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn points(&self) -> &[RationalVector] {
        self.inner.points()
    }

    pub fn as_point_set(&self) -> &PointSet {
        &self.inner
    }
}

/// The direction choice for one induction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WStarChoice {
    /// Index of the chosen point `w*`.
    pub index: usize,
    /// For every point `w`, the number of pairs `{u, v}` (both distinct
    /// from `w`) with `v - u` parallel to `w`.
    pub census: Vec<u64>,
    /// The pairs counted for `w*`, as sorted index pairs.
    pub pairs: Vec<(usize, usize)>,
}

/// Picks the point whose parallel-pair census is smallest (ties toward the
/// smallest index). Pigeonhole over all pairs guarantees the winner's count
/// is at most `(m-1)/2`; this is re-checked before returning.
pub fn choose_wstar(set: &GeneralPositionSet) -> Result<WStarChoice> {
    let d = set.dim();
    let m = set.len();
    if d < 2 {
        return Err(Error::InvalidParameter(
            "direction choice requires dimension at least 2".into(),
        ));
    }
    if m < d {
        return Err(Error::TooFewPoints {
            needed: d,
            found: m,
        });
    }
    let pts = set.points();
    let mut census = vec![0u64; m];
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            let diff = pts[j].sub(&pts[i]);
            for (w, point) in pts.iter().enumerate() {
                if w == i || w == j {
                    continue;
                }
                if is_parallel(&diff, point) {
                    census[w] += 1;
                    pairs[w].push((i, j));
                }
            }
        }
    }
    let index = census
        .iter()
        .enumerate()
        .min_by_key(|&(i, &c)| (c, i))
        .map(|(i, _)| i)
        .expect("nonempty set");
    let bound = ((m - 1) / 2) as u64;
    if census[index] > bound {
        return Err(Error::Invariant(format!(
            "parallel-pair census {} for the chosen direction exceeds (m-1)/2 = {bound}",
            census[index]
        )));
    }
    Ok(WStarChoice {
        index,
        pairs: pairs[index].clone(),
        census,
    })
}

/// Result of projecting the complement of one point onto its orthogonal
/// hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Projection {
    /// Canonical integer basis of `w^perp`: for each coordinate `j` other
    /// than the pivot (the first nonzero coordinate of `w`), the primitive,
    /// sign-normalized vector supported on `{j, pivot}`.
    pub basis: Vec<RationalVector>,
    /// Indices of the points (in the original set) whose images survive
    /// deduplication, in first-occurrence order.
    pub kept: Vec<usize>,
    /// How many projected points collapsed onto an earlier image.
    pub collapsed: usize,
    /// The projected set, expressed in basis coordinates and revalidated.
    pub image: GeneralPositionSet,
}

/// Projects every point except `points[w_index]` orthogonally onto
/// `w^perp`, expressed in a canonical basis, deduplicates the images, and
/// revalidates general position one dimension down.
pub fn project_complement(set: &GeneralPositionSet, w_index: usize) -> Result<Projection> {
    let d = set.dim();
    let m = set.len();
    if d < 2 {
        return Err(Error::InvalidParameter(
            "projection requires dimension at least 2".into(),
        ));
    }
    if m < d {
        return Err(Error::TooFewPoints {
            needed: d,
            found: m,
        });
    }
    if w_index >= m {
        return Err(Error::IndexOutOfRange {
            index: w_index,
            n: m,
        });
    }
    let pts = set.points();
    let w = &pts[w_index];
    let norm = w.dot(w);
    if norm.is_zero() {
        return Err(Error::ZeroNormDirection);
    }
    let w_int = primitive_integer(w);
    let pivot = w_int
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero direction");

    let mut basis = Vec::with_capacity(d - 1);
    let mut basis_lead = Vec::with_capacity(d - 1);
    for j in (0..d).filter(|&j| j != pivot) {
        let g = w_int[pivot].gcd(&w_int[j]);
        let mut at_j = &w_int[pivot] / &g;
        let mut at_pivot = -(&w_int[j] / &g);
        // Sign normalization: first nonzero component positive.
        let first = if j < pivot { &at_j } else { &at_pivot };
        let flip = if first.is_zero() {
            // at_pivot is zero only when w_j = 0, leaving at_j = w_p/g != 0.
            at_j.is_negative()
        } else {
            first.is_negative()
        };
        if flip {
            at_j = -at_j;
            at_pivot = -at_pivot;
        }
        let mut coords = vec![Rational::zero(); d];
        coords[j] = Rational::from_bigint(at_j.clone());
        coords[pivot] = Rational::from_bigint(at_pivot);
        basis.push(RationalVector::new(coords));
        basis_lead.push(Rational::from_bigint(at_j));
    }

    let mut kept: Vec<usize> = Vec::new();
    let mut image_points: Vec<RationalVector> = Vec::new();
    let mut seen: BTreeMap<RationalVector, usize> = BTreeMap::new();
    let mut collapsed = 0usize;
    for (i, u) in pts.iter().enumerate() {
        if i == w_index {
            continue;
        }
        let t = u.dot(w).checked_div(&norm).expect("nonzero norm");
        let shadow = u.sub(&w.scale(&t));
        let coords: Vec<Rational> = (0..d)
            .filter(|&j| j != pivot)
            .zip(&basis_lead)
            .map(|(j, lead)| {
                shadow.coords()[j]
                    .checked_div(lead)
                    .expect("basis leads are nonzero")
            })
            .collect();
        let image = RationalVector::new(coords);
        match seen.get(&image) {
            Some(_) => collapsed += 1,
            None => {
                seen.insert(image.clone(), i);
                kept.push(i);
                image_points.push(image);
            }
        }
    }

    let image_set = PointSet::new(d - 1, image_points)
        .and_then(GeneralPositionSet::validate)
        .map_err(|e| {
            Error::Invariant(format!(
                "projected image left general position unexpectedly: {e}"
            ))
        })?;
    Ok(Projection {
        basis,
        kept,
        collapsed,
        image: image_set,
    })
}

/// How one node of the size recurrence was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum GpRule {
    /// `d = 1`: at least `r = ceil(m/2)` values share a sign, giving
    /// `r(r+1)/2 + 1` distinct subset sums.
    Base { r: u64 },
    /// `m < d`: the empty set and the singletons are always distinct.
    Thin,
    /// `B(d, m) = B(d, m-1) + B(d-1, ceil((m-1)/2))`.
    Recurse {
        prev: (usize, usize),
        projected: (usize, usize),
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpTraceRow {
    pub d: usize,
    pub m: usize,
    pub value: u64,
    #[serde(flatten)]
    pub rule: GpRule,
}

/// The closed recurrence bound with its evaluation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpBound {
    pub d: usize,
    pub m: usize,
    pub value: u64,
    /// All nodes reachable from the root, sorted by `(d, m)`. Omitted when
    /// the node count is impractical to report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<GpTraceRow>>,
}

fn classify(d: usize, m: usize) -> GpRule {
    if d == 1 {
        GpRule::Base {
            r: m.div_ceil(2) as u64,
        }
    } else if m < d {
        GpRule::Thin
    } else {
        GpRule::Recurse {
            prev: (d, m - 1),
            projected: (d - 1, (m - 1).div_ceil(2)),
        }
    }
}

/// Evaluates the recurrence `B(d, m)` bottom-up with checked arithmetic.
pub fn gp_recurrence_bound(d: usize, m: usize) -> Result<GpBound> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if d > 32 {
        return Err(Error::InvalidParameter(
            "dimensions beyond 32 are not supported".into(),
        ));
    }
    if m > GP_RECURRENCE_MAX_M {
        return Err(Error::TooLarge {
            what: "recurrence length",
            size: m as u64,
            cap: GP_RECURRENCE_MAX_M as u64,
        });
    }
    let overflow = || Error::TooLarge {
        what: "recurrence value",
        size: u64::MAX,
        cap: u64::MAX,
    };
    // table[dd - 1][mm] = B(dd, mm)
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(d);
    for dd in 1..=d {
        let mut row: Vec<u64> = Vec::with_capacity(m + 1);
        for mm in 0..=m {
            let v = match classify(dd, mm) {
                GpRule::Base { r } => r
                    .checked_mul(r + 1)
                    .map(|x| x / 2)
                    .and_then(|x| x.checked_add(1))
                    .ok_or_else(overflow)?,
                GpRule::Thin => mm as u64 + 1,
                GpRule::Recurse { prev, projected } => {
                    let a = row[prev.1];
                    let b = table[projected.0 - 1][projected.1];
                    a.checked_add(b).ok_or_else(overflow)?
                }
            };
            row.push(v);
        }
        table.push(row);
    }

    // Collect the sub-DAG actually reachable from the root.
    let mut reached: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut stack = vec![(d, m)];
    while let Some((dd, mm)) = stack.pop() {
        if reached.contains_key(&(dd, mm)) {
            continue;
        }
        reached.insert((dd, mm), table[dd - 1][mm]);
        if let GpRule::Recurse { prev, projected } = classify(dd, mm) {
            stack.push(prev);
            stack.push(projected);
        }
        if reached.len() > GP_TRACE_LIMIT {
            break;
        }
    }
    let trace = if reached.len() <= GP_TRACE_LIMIT {
        Some(
            reached
                .iter()
                .map(|(&(dd, mm), &value)| GpTraceRow {
                    d: dd,
                    m: mm,
                    value,
                    rule: classify(dd, mm),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(GpBound {
        d,
        m,
        value: table[d - 1][m],
        trace,
    })
}

/// One node of the constructive induction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructiveNode {
    /// `d = 1`: counts of positive and negative coordinates; the larger
    /// sign class drives the base bound.
    Base {
        m: usize,
        positive: usize,
        negative: usize,
        value: u64,
    },
    /// Fewer points than dimensions.
    Thin { d: usize, m: usize, value: u64 },
    /// A direction choice followed by the two recursive branches.
    Split {
        d: usize,
        m: usize,
        w_index: usize,
        parallel_pairs: usize,
        collapsed: usize,
        value: u64,
        minus: Box<ConstructiveNode>,
        image: Box<ConstructiveNode>,
    },
}

impl ConstructiveNode {
    pub fn value(&self) -> u64 {
        match self {
            ConstructiveNode::Base { value, .. }
            | ConstructiveNode::Thin { value, .. }
            | ConstructiveNode::Split { value, .. } => *value,
        }
    }
}

/// The constructive bound together with the recurrence value it dominates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructiveBound {
    pub d: usize,
    pub m: usize,
    pub value: u64,
    /// `B(d, m)` on the same parameters; always `<= value`.
    pub recurrence: u64,
    pub trace: ConstructiveNode,
}

/// Runs the induction on the actual point set: every step picks `w*`,
/// recurses on the set minus `w*` and on its projected image, and adds the
/// two bounds. The result dominates [`gp_recurrence_bound`] because real
/// images never shrink below the pigeonhole floor; that domination is
/// checked before returning.
pub fn constructive_bound(set: &GeneralPositionSet) -> Result<ConstructiveBound> {
    let d = set.dim();
    let m = set.len();
    let trace = construct(d, set.points().to_vec())?;
    let value = trace.value();
    let recurrence = gp_recurrence_bound(d, m)?.value;
    if value < recurrence {
        return Err(Error::Invariant(format!(
            "constructive bound {value} fell below the recurrence bound {recurrence}"
        )));
    }
    Ok(ConstructiveBound {
        d,
        m,
        value,
        recurrence,
        trace,
    })
}

fn construct(dim: usize, points: Vec<RationalVector>) -> Result<ConstructiveNode> {
    let m = points.len();
    if dim == 1 {
        let positive = points
            .iter()
            .filter(|p| p.coords()[0].is_positive())
            .count();
        let negative = m - positive;
        let r = positive.max(negative) as u64;
        let value = r * (r + 1) / 2 + 1;
        return Ok(ConstructiveNode::Base {
            m,
            positive,
            negative,
            value,
        });
    }
    if m < dim {
        return Ok(ConstructiveNode::Thin {
            d: dim,
            m,
            value: m as u64 + 1,
        });
    }
    let gp = GeneralPositionSet::validate(PointSet::new(dim, points.clone())?)?;
    let choice = choose_wstar(&gp)?;
    let projection = project_complement(&gp, choice.index)?;
    let minus: Vec<RationalVector> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != choice.index)
        .map(|(_, p)| p.clone())
        .collect();
    let minus_node = construct(dim, minus)?;
    let image_node = construct(dim - 1, projection.image.points().to_vec())?;
    let value = minus_node
        .value()
        .checked_add(image_node.value())
        .ok_or(Error::TooLarge {
            what: "constructive bound value",
            size: u64::MAX,
            cap: u64::MAX,
        })?;
    Ok(ConstructiveNode::Split {
        d: dim,
        m,
        w_index: choice.index,
        parallel_pairs: choice.pairs.len(),
        collapsed: projection.collapsed,
        value,
        minus: Box::new(minus_node),
        image: Box::new(image_node),
    })
}

/// Whether two vectors are parallel: all two-by-two minors vanish.
pub fn is_parallel(u: &RationalVector, v: &RationalVector) -> bool {
    let d = u.dim();
    debug_assert_eq!(d, v.dim());
    for i in 0..d {
        for j in i + 1..d {
            let lhs = u.coords()[i].mul(&v.coords()[j]);
            let rhs = u.coords()[j].mul(&v.coords()[i]);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Scales a rational vector to a primitive integer vector (same direction,
/// coprime coordinates). The zero vector maps to itself.
fn primitive_integer(v: &RationalVector) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in v.coords() {
        lcm = lcm.lcm(c.denom());
    }
    let scaled: Vec<BigInt> = v
        .coords()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for c in &scaled {
        gcd = gcd.gcd(c);
    }
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|c| c / &gcd).collect()
}

/// Exact determinant via fraction-free (Bareiss) elimination.
fn det_bigint(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// `C(m, d)` with saturation; callers only compare against a budget.
fn binomial_u128(m: usize, d: usize) -> u128 {
    debug_assert!(d <= m);
    let d = d.min(m - d);
    let mut acc: u128 = 1;
    for i in 0..d {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    acc
}

//! From planar rectangles to points against corner boxes and half-spaces.
//!
//! A closed rectangle `[x1,x2] x [y1,y2]` in the open first quadrant maps to
//! the point `(x1, 1/x2, y1, 1/y2)` in 4-space, and a query point `(a, b)` to
//! the box `[0,a] x [0,1/a] x [0,b] x [0,1/b]`: the query lies in the
//! rectangle exactly when the mapped point lies in the box. A monotone
//! per-axis rescaling (j-th smallest value goes to `(m+1)^j`) then spreads
//! the coordinates enough that every origin-anchored box can be replaced by
//! the half-space `sum x_i / b_i <= m` without changing any incidence.

use crate::construction::{ConstructionError, Family};
use crate::geometry::{Point2, Rect};
use crate::rangespace::RangeSpace;
use crate::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualityError {
    #[error("coordinate {0} is not strictly positive")]
    NonpositiveCoordinate(String),
    #[error("rectangle endpoint {0} is not strictly positive; shift the family first")]
    NonpositiveEndpoint(String),
    #[error("rectangle must be closed on all four sides")]
    RectNotClosed,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("shift offset must be strictly positive")]
    BadOffset,
    #[error(
        "grid ratio condition violated on axis {axis}: {lo} to {hi} is not more than a factor {m}"
    )]
    RatioTooSmall {
        axis: usize,
        lo: String,
        hi: String,
        m: usize,
    },
    #[error("grid axis {axis} holds nonpositive value {value}")]
    BadGrid { axis: usize, value: String },
    #[error("box and derived half-space disagree on a point (seed-reproducible)")]
    EquivalenceFailed,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// A point in m-space with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointD {
    pub coords: Vec<Rational>,
}

impl PointD {
    pub fn new(coords: Vec<Rational>) -> Self {
        PointD { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// The box `[0, b_1] x ... x [0, b_m]`, one vertex at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerBox {
    pub uppers: Vec<Rational>,
}

impl CornerBox {
    pub fn new(uppers: Vec<Rational>) -> Result<Self, DualityError> {
        if let Some(bad) = uppers.iter().find(|u| !u.is_positive()) {
            return Err(DualityError::NonpositiveCoordinate(bad.to_string()));
        }
        Ok(CornerBox { uppers })
    }

    pub fn dim(&self) -> usize {
        self.uppers.len()
    }

    /// Closed membership: `0 <= p_i <= b_i` on every axis.
    pub fn contains(&self, p: &PointD) -> Result<bool, DualityError> {
        if p.dim() != self.dim() {
            return Err(DualityError::DimensionMismatch {
                left: p.dim(),
                right: self.dim(),
            });
        }
        Ok(p.coords
            .iter()
            .zip(&self.uppers)
            .all(|(c, u)| !c.is_negative() && c <= u))
    }
}

/// The half-space `sum coefficients_i * x_i <= rhs`, containing the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    pub coefficients: Vec<Rational>,
    pub rhs: Rational,
}

impl HalfSpace {
    pub fn contains(&self, p: &PointD) -> Result<bool, DualityError> {
        if p.dim() != self.coefficients.len() {
            return Err(DualityError::DimensionMismatch {
                left: p.dim(),
                right: self.coefficients.len(),
            });
        }
        let mut acc = Rational::zero();
        for (c, x) in self.coefficients.iter().zip(&p.coords) {
            acc = acc + c * x;
        }
        Ok(acc <= self.rhs)
    }

    pub fn contains_origin(&self) -> bool {
        !self.rhs.is_negative()
    }
}

/// `(x_lo, 1/x_hi, y_lo, 1/y_hi)` for a closed rectangle in the open first
/// quadrant.
pub fn rect_to_point4(rect: &Rect) -> Result<PointD, DualityError> {
    if !rect.closed.iter().all(|&c| c) {
        return Err(DualityError::RectNotClosed);
    }
    for v in [&rect.x_lo, &rect.x_hi, &rect.y_lo, &rect.y_hi] {
        if !v.is_positive() {
            return Err(DualityError::NonpositiveEndpoint(v.to_string()));
        }
    }
    Ok(PointD::new(vec![
        rect.x_lo.clone(),
        rect.x_hi.recip(),
        rect.y_lo.clone(),
        rect.y_hi.recip(),
    ]))
}

/// `[0,a] x [0,1/a] x [0,b] x [0,1/b]` for a query point `(a, b)` with
/// positive coordinates.
pub fn query_box(q: &Point2) -> Result<CornerBox, DualityError> {
    for v in [&q.x, &q.y] {
        if !v.is_positive() {
            return Err(DualityError::NonpositiveCoordinate(v.to_string()));
        }
    }
    CornerBox::new(vec![q.x.clone(), q.x.recip(), q.y.clone(), q.y.recip()])
}

/// Translate every family rectangle by `(offset, offset)` and close it, so
/// the corner-box mapping applies. Interior witnesses keep their incidences.
pub fn shift_family(family: &Family, offset: &Rational) -> Result<Vec<Rect>, DualityError> {
    shift_rects(family.rects(), offset)
}

/// The same translation for a bare rectangle list (blown-up chains included).
pub fn shift_rects(rects: &[Rect], offset: &Rational) -> Result<Vec<Rect>, DualityError> {
    if !offset.is_positive() {
        return Err(DualityError::BadOffset);
    }
    Ok(rects.iter().map(|r| r.translated_closed(offset)).collect())
}

/// Ground set = points; one range per box.
pub fn box_incidence_space(
    points: &[PointD],
    boxes: &[CornerBox],
) -> Result<RangeSpace, DualityError> {
    incidence_space(points, boxes, |b, p| b.contains(p))
}

/// Ground set = points; one range per half-space.
pub fn halfspace_incidence_space(
    points: &[PointD],
    halfspaces: &[HalfSpace],
) -> Result<RangeSpace, DualityError> {
    incidence_space(points, halfspaces, |h, p| h.contains(p))
}

fn incidence_space<S>(
    points: &[PointD],
    shapes: &[S],
    contains: impl Fn(&S, &PointD) -> Result<bool, DualityError>,
) -> Result<RangeSpace, DualityError> {
    let mut ranges = Vec::with_capacity(shapes.len());
    for shape in shapes {
        let mut range = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if contains(shape, p)? {
                range.push(i as u32);
            }
        }
        ranges.push(range);
    }
    Ok(RangeSpace::from_incidences(points.len(), ranges)
        .expect("point indices are in bounds by construction"))
}

/// The monotone per-axis rescaling: on each axis the j-th smallest distinct
/// value (1-based) becomes `(m+1)^j`, so consecutive distinct values stay a
/// factor `m + 1 > m` apart and all coordinatewise comparisons survive.
#[derive(Debug, Clone)]
pub struct AxisScale {
    /// Sorted distinct original values per axis.
    originals: Vec<Vec<Rational>>,
    m: usize,
}

impl AxisScale {
    pub fn build(points: &[PointD], m: usize) -> Result<Self, DualityError> {
        assert!(m >= 1);
        let dim = points.first().map_or(0, PointD::dim);
        let mut originals: Vec<Vec<Rational>> = vec![Vec::new(); dim];
        for p in points {
            if p.dim() != dim {
                return Err(DualityError::DimensionMismatch {
                    left: p.dim(),
                    right: dim,
                });
            }
            for (axis, v) in p.coords.iter().enumerate() {
                if !v.is_positive() {
                    return Err(DualityError::NonpositiveCoordinate(v.to_string()));
                }
                originals[axis].push(v.clone());
            }
        }
        for axis in &mut originals {
            axis.sort_unstable();
            axis.dedup();
        }
        Ok(AxisScale { originals, m })
    }

    pub fn dim(&self) -> usize {
        self.originals.len()
    }

    /// Rescaled value of a coordinate that occurs in the point set.
    fn rescale_value(&self, axis: usize, v: &Rational) -> Rational {
        let rank = self.originals[axis]
            .binary_search(v)
            .expect("value occurs on this axis");
        Rational::pow(self.m as i64 + 1, rank as i32 + 1)
    }

    pub fn rescale_point(&self, p: &PointD) -> PointD {
        PointD::new(
            p.coords
                .iter()
                .enumerate()
                .map(|(axis, v)| self.rescale_value(axis, v))
                .collect(),
        )
    }

    /// Rescaled image of a box upper bound: snap down to the largest original
    /// value `<= upper` and map it; an upper below the whole axis maps to 1,
    /// below the smallest rescaled value.
    pub fn rescale_upper(&self, axis: usize, upper: &Rational) -> Rational {
        let rank = self.originals[axis].partition_point(|v| v <= upper);
        Rational::pow(self.m as i64 + 1, rank as i32)
    }

    pub fn rescale_box(&self, b: &CornerBox) -> Result<CornerBox, DualityError> {
        if b.dim() != self.dim() {
            return Err(DualityError::DimensionMismatch {
                left: b.dim(),
                right: self.dim(),
            });
        }
        CornerBox::new(
            b.uppers
                .iter()
                .enumerate()
                .map(|(axis, u)| self.rescale_upper(axis, u))
                .collect(),
        )
    }

    /// The rescaled grid: distinct values present per axis, sorted.
    pub fn rescaled_grid(&self) -> Vec<Vec<Rational>> {
        self.originals
            .iter()
            .map(|axis| {
                (1..=axis.len())
                    .map(|j| Rational::pow(self.m as i64 + 1, j as i32))
                    .collect()
            })
            .collect()
    }
}

/// Replace every point by its rescaled image; incidences against boxes with
/// grid-aligned uppers are preserved by monotonicity.
pub fn rescale_for_halfspaces(points: &[PointD], m: usize) -> Result<Vec<PointD>, DualityError> {
    let scale = AxisScale::build(points, m)?;
    Ok(points.iter().map(|p| scale.rescale_point(p)).collect())
}

/// The half-space `sum x_i / b_i' <= m` where `b_i'` snaps `b_i` down to the
/// largest grid value `<= b_i` (shrinking the box never changes which grid
/// points it holds), or to `grid_min / (m+1)` when the box lies below the
/// whole axis so that no point can satisfy that term.
///
/// Requires positive grid values with consecutive ratios exceeding `m` on
/// every axis.
pub fn halfspace_from_box(
    b: &CornerBox,
    grid: &[Vec<Rational>],
    m: usize,
) -> Result<HalfSpace, DualityError> {
    if b.dim() != grid.len() {
        return Err(DualityError::DimensionMismatch {
            left: b.dim(),
            right: grid.len(),
        });
    }
    let m_rat = Rational::from(m);
    for (axis, values) in grid.iter().enumerate() {
        for v in values {
            if !v.is_positive() {
                return Err(DualityError::BadGrid {
                    axis,
                    value: v.to_string(),
                });
            }
        }
        for w in values.windows(2) {
            if w[1] <= &w[0] * &m_rat {
                return Err(DualityError::RatioTooSmall {
                    axis,
                    lo: w[0].to_string(),
                    hi: w[1].to_string(),
                    m,
                });
            }
        }
    }
    let mut coefficients = Vec::with_capacity(b.dim());
    for (axis, upper) in b.uppers.iter().enumerate() {
        let values = &grid[axis];
        let snapped = match values.iter().rev().find(|v| *v <= upper) {
            Some(v) => v.clone(),
            None => {
                values.first().expect("nonempty grid axis").clone() / Rational::from(m as i64 + 1)
            }
        };
        coefficients.push(snapped.recip());
    }
    Ok(HalfSpace {
        coefficients,
        rhs: m_rat,
    })
}

/// A point/half-space instance in 4-space equivalent to the family's dual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Instance {
    pub points: Vec<PointD>,
    pub halfspaces: Vec<HalfSpace>,
}

/// Full pipeline: unit-shift the family, map rectangles to points, rescale,
/// and emulate the query box of every witness by a half-space. The resulting
/// range space over the points equals the family's dual range space as a
/// hypergraph, so minimum epsilon-net sizes transfer.
pub fn theorem3_instance(family: &Family) -> Result<Theorem3Instance, DualityError> {
    theorem3_from_rects(family.rects(), &family.witness_points())
}

/// The pipeline over a bare rectangle list and its witness points.
pub fn theorem3_from_rects(
    rects: &[Rect],
    witnesses: &[Point2],
) -> Result<Theorem3Instance, DualityError> {
    const M: usize = 4;
    let offset = Rational::one();
    let shifted = shift_rects(rects, &offset)?;
    let raw_points: Vec<PointD> = shifted
        .iter()
        .map(rect_to_point4)
        .collect::<Result<_, _>>()?;
    let scale = AxisScale::build(&raw_points, M)?;
    let points: Vec<PointD> = raw_points.iter().map(|p| scale.rescale_point(p)).collect();
    let grid = scale.rescaled_grid();

    let mut halfspaces = Vec::new();
    let mut seen: HashSet<(Vec<Rational>, Rational)> = HashSet::new();
    for witness in witnesses {
        let q = Point2::new(&witness.x + &offset, &witness.y + &offset);
        let scaled_box = scale.rescale_box(&query_box(&q)?)?;
        let hs = halfspace_from_box(&scaled_box, &grid, M)?;
        if seen.insert((hs.coefficients.clone(), hs.rhs.clone())) {
            halfspaces.push(hs);
        }
    }
    Ok(Theorem3Instance { points, halfspaces })
}

/// Draw `samples` random positive-rational (rectangle, query) pairs and check
/// `q in R <=> p(R) in B(q)` exactly. Returns the first counterexample, if
/// any.
pub fn check_random_incidences(samples: usize, seed: u64) -> Result<(), Box<(Rect, Point2)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rat = |lo: i64, hi: i64| Rational::new(rng.gen_range(lo..=hi), rng.gen_range(1..=24));
    for _ in 0..samples {
        let x1 = rat(1, 200);
        let x2 = &x1 + &rat(1, 50);
        let y1 = rat(1, 200);
        let y2 = &y1 + &rat(1, 50);
        let rect = Rect::closed(x1, x2, y1, y2);
        let q = Point2::new(rat(1, 250), rat(1, 250));
        let in_rect = rect.contains(&q);
        let in_box = query_box(&q)
            .expect("positive query")
            .contains(&rect_to_point4(&rect).expect("positive closed rect"))
            .expect("dimensions agree");
        if in_rect != in_box {
            return Err(Box::new((rect, q)));
        }
    }
    Ok(())
}

/// Random positive point sets and grid-cornered boxes: after rescaling,
/// box membership and the derived half-space membership agree point for
/// point. Returns the number of (set, box) combinations checked.
pub fn check_random_box_halfspace_equivalence(
    sets: usize,
    boxes_per_set: usize,
    max_points: usize,
    max_dim: usize,
    seed: u64,
) -> Result<usize, DualityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..sets {
        let dim = rng.gen_range(1..=max_dim);
        let n = rng.gen_range(1..=max_points);
        let points: Vec<PointD> = (0..n)
            .map(|_| {
                PointD::new(
                    (0..dim)
                        .map(|_| Rational::new(rng.gen_range(1..=60), rng.gen_range(1..=12)))
                        .collect(),
                )
            })
            .collect();
        let scale = AxisScale::build(&points, dim)?;
        let rescaled: Vec<PointD> = points.iter().map(|p| scale.rescale_point(p)).collect();
        let grid = scale.rescaled_grid();
        for _ in 0..boxes_per_set {
            // Box uppers: a grid value per axis, or occasionally below-grid.
            let uppers: Vec<Rational> = (0..dim)
                .map(|axis| {
                    let values = &grid[axis];
                    let pick = rng.gen_range(0..=values.len());
                    if pick == 0 {
                        Rational::one()
                    } else {
                        values[pick - 1].clone()
                    }
                })
                .collect();
            let b = CornerBox::new(uppers)?;
            let hs = halfspace_from_box(&b, &grid, dim)?;
            for p in &rescaled {
                if b.contains(p)? != hs.contains(p)? {
                    return Err(DualityError::EquivalenceFailed);
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_family;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn point_map_formula() {
        let r = Rect::closed(rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1));
        let p = rect_to_point4(&r).unwrap();
        assert_eq!(p.coords, vec![rat(1, 1), rat(1, 2), rat(3, 1), rat(1, 4)]);
        let open = Rect::open(rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1));
        assert!(matches!(
            rect_to_point4(&open),
            Err(DualityError::RectNotClosed)
        ));
        let touching = Rect::closed(rat(0, 1), rat(2, 1), rat(3, 1), rat(4, 1));
        assert!(matches!(
            rect_to_point4(&touching),
            Err(DualityError::NonpositiveEndpoint(_))
        ));
    }

    #[test]
    fn query_box_formula() {
        let b = query_box(&Point2::new(rat(3, 2), rat(7, 2))).unwrap();
        assert_eq!(b.uppers, vec![rat(3, 2), rat(2, 3), rat(7, 2), rat(2, 7)]);
        let unit = query_box(&Point2::new(rat(1, 1), rat(1, 1))).unwrap();
        assert_eq!(unit.uppers, vec![Rational::one(); 4]);
        assert!(query_box(&Point2::new(rat(0, 1), rat(1, 1))).is_err());
    }

    #[test]
    fn incidence_equivalence_example() {
        let r = Rect::closed(rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1));
        let q = Point2::new(rat(3, 2), rat(7, 2));
        assert!(r.contains(&q));
        let b = query_box(&q).unwrap();
        assert!(b.contains(&rect_to_point4(&r).unwrap()).unwrap());
    }

    #[test]
    fn shift_translates_and_closes() {
        let f = build_family(3, 1).unwrap();
        let shifted = shift_family(&f, &Rational::one()).unwrap();
        assert_eq!(shifted[0].x_lo, rat(1, 1));
        assert_eq!(shifted[0].x_hi, rat(2, 1));
        assert_eq!(shifted[0].y_hi, rat(4, 3));
        assert!(shifted.iter().all(|r| r.closed == [true; 4]));
        assert!(shift_family(&f, &Rational::zero()).is_err());
    }

    #[test]
    fn shift_preserves_witness_incidences() {
        let f = build_family(3, 1).unwrap();
        let shifted = shift_family(&f, &Rational::one()).unwrap();
        for w in f.witness_points() {
            let sw = Point2::new(&w.x + &Rational::one(), &w.y + &Rational::one());
            for (orig, moved) in f.rects().iter().zip(&shifted) {
                assert_eq!(orig.contains(&w), moved.contains(&sw));
            }
        }
    }

    #[test]
    fn box_membership_is_closed() {
        let b = CornerBox::new(vec![rat(1, 1), rat(1, 1)]).unwrap();
        assert!(b
            .contains(&PointD::new(vec![rat(1, 1), rat(1, 1)]))
            .unwrap());
        assert!(!b
            .contains(&PointD::new(vec![rat(2, 1), rat(1, 1)]))
            .unwrap());
        assert!(b.contains(&PointD::new(vec![rat(1, 1)])).is_err());
    }

    #[test]
    fn rescale_rank_map() {
        let points = vec![
            PointD::new(vec![rat(1, 4)]),
            PointD::new(vec![rat(1, 1)]),
            PointD::new(vec![rat(3, 1)]),
        ];
        let rescaled = rescale_for_halfspaces(&points, 2).unwrap();
        let values: Vec<Rational> = rescaled.into_iter().map(|p| p.coords[0].clone()).collect();
        assert_eq!(values, vec![rat(3, 1), rat(9, 1), rat(27, 1)]);
    }

    #[test]
    fn rescale_rejects_nonpositive() {
        let points = vec![PointD::new(vec![rat(-1, 2)])];
        assert!(rescale_for_halfspaces(&points, 2).is_err());
    }

    #[test]
    fn halfspace_matches_box_on_small_grid() {
        let grid = vec![vec![rat(3, 1), rat(9, 1)], vec![rat(3, 1), rat(9, 1)]];
        let b = CornerBox::new(vec![rat(3, 1), rat(9, 1)]).unwrap();
        let hs = halfspace_from_box(&b, &grid, 2).unwrap();
        assert_eq!(hs.rhs, rat(2, 1));
        let inside = PointD::new(vec![rat(3, 1), rat(9, 1)]);
        let outside = PointD::new(vec![rat(9, 1), rat(3, 1)]);
        assert!(hs.contains(&inside).unwrap());
        assert!(b.contains(&inside).unwrap());
        assert!(!hs.contains(&outside).unwrap());
        assert!(!b.contains(&outside).unwrap());
        assert!(hs.contains_origin());
    }

    #[test]
    fn below_grid_box_excludes_everything() {
        let grid = vec![vec![rat(5, 1), rat(30, 1)]];
        let b = CornerBox::new(vec![rat(2, 1)]).unwrap();
        let hs = halfspace_from_box(&b, &grid, 4).unwrap();
        // Snapped upper is 5/5 = 1, so any grid point already exceeds rhs.
        for v in [rat(5, 1), rat(30, 1)] {
            assert!(!hs.contains(&PointD::new(vec![v])).unwrap());
        }
        assert!(hs.contains(&PointD::new(vec![Rational::zero()])).unwrap());
    }

    #[test]
    fn ratio_condition_is_enforced() {
        let grid = vec![vec![rat(1, 1), rat(2, 1)]];
        let b = CornerBox::new(vec![rat(1, 1)]).unwrap();
        assert!(matches!(
            halfspace_from_box(&b, &grid, 2),
            Err(DualityError::RatioTooSmall { .. })
        ));
    }

    #[test]
    fn theorem3_depth_one() {
        let f = build_family(3, 1).unwrap();
        let inst = theorem3_instance(&f).unwrap();
        assert_eq!(inst.points.len(), 2);
        let space = halfspace_incidence_space(&inst.points, &inst.halfspaces).unwrap();
        let dual = f.dual_space().unwrap();
        assert_eq!(space.ranges(), dual.ranges());
        assert!(inst.halfspaces.iter().all(HalfSpace::contains_origin));
    }

    #[test]
    fn random_incidences_hold() {
        assert!(check_random_incidences(500, 7).is_ok());
    }

    #[test]
    fn random_box_halfspace_equivalence_holds() {
        let checked = check_random_box_halfspace_equivalence(20, 10, 12, 3, 11).unwrap();
        assert!(checked > 0);
    }
}

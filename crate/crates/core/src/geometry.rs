//! Exact planar primitives: points, squared radii, per-segment squared
//! distance profiles, circle/segment event extraction and critical radii.
//!
//! All radius comparisons happen on squares so that every predicate stays
//! rational. Crossing parameters that are irrational are carried as exact
//! root tokens (see [`crate::algebra`]).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{quad_sign_at, rational_between, solve_quadratic, Param, QuadSolutions};
use crate::model::PolyArc;
use crate::scalar::{Scalar, Sign};

/// A point of the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(Scalar, Scalar)>::deserialize(d)?;
        Ok(Point { x, y })
    }
}

/// Squared distance between two points.
pub fn distance2(p: &Point, q: &Point) -> Scalar {
    (&p.x - &q.x).square() + (&p.y - &q.y).square()
}

/// Sign of the cross product (b - a) x (c - a).
pub fn orient(a: &Point, b: &Point, c: &Point) -> Sign {
    let v = &(&(&b.x - &a.x) * &(&c.y - &a.y)) - &(&(&b.y - &a.y) * &(&c.x - &a.x));
    v.sign()
}

/// Point at parameter `t` on the segment `[a, b]`.
pub fn point_at(a: &Point, b: &Point, t: &Scalar) -> Point {
    Point {
        x: &a.x + &(&(&b.x - &a.x) * t),
        y: &a.y + &(&(&b.y - &a.y) * t),
    }
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Sign::Zero {
        return false;
    }
    let dot = &(&(&p.x - &a.x) * &(&b.x - &a.x)) + &(&(&p.y - &a.y) * &(&b.y - &a.y));
    if dot.is_negative() {
        return false;
    }
    dot <= distance2(a, b)
}

/// Exact intersection of two closed segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegIntersection {
    None,
    /// A single common point.
    At(Point),
    /// A collinear overlap of positive length.
    Overlap(Point, Point),
}

pub fn segment_intersection(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> SegIntersection {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);

    if d1 == Sign::Zero && d2 == Sign::Zero && d3 == Sign::Zero && d4 == Sign::Zero {
        // all four points collinear: compare along the dominant axis
        let horiz = (&a1.x - &a2.x).abs() >= (&a1.y - &a2.y).abs();
        let key = |p: &Point| if horiz { p.x.clone() } else { p.y.clone() };
        let (mut alo, mut ahi) = (a1.clone(), a2.clone());
        if key(&alo) > key(&ahi) {
            std::mem::swap(&mut alo, &mut ahi);
        }
        let (mut blo, mut bhi) = (b1.clone(), b2.clone());
        if key(&blo) > key(&bhi) {
            std::mem::swap(&mut blo, &mut bhi);
        }
        let lo = if key(&alo) >= key(&blo) { alo } else { blo };
        let hi = if key(&ahi) <= key(&bhi) { ahi } else { bhi };
        return match key(&lo).cmp(&key(&hi)) {
            Ordering::Greater => SegIntersection::None,
            Ordering::Equal => SegIntersection::At(lo),
            Ordering::Less => SegIntersection::Overlap(lo, hi),
        };
    }

    let straddle_a = (d1 == Sign::Neg && d2 == Sign::Pos) || (d1 == Sign::Pos && d2 == Sign::Neg);
    let straddle_b = (d3 == Sign::Neg && d4 == Sign::Pos) || (d3 == Sign::Pos && d4 == Sign::Neg);
    if straddle_a && straddle_b {
        // proper crossing: a1 + t (a2 - a1), t rational
        let rx = &a2.x - &a1.x;
        let ry = &a2.y - &a1.y;
        let sx = &b2.x - &b1.x;
        let sy = &b2.y - &b1.y;
        let denom = &(&rx * &sy) - &(&ry * &sx);
        let qx = &b1.x - &a1.x;
        let qy = &b1.y - &a1.y;
        let t = &(&(&qx * &sy) - &(&qy * &sx)) / &denom;
        return SegIntersection::At(point_at(a1, a2, &t));
    }

    // endpoint touches
    if d1 == Sign::Zero && point_on_segment(a1, b1, b2) {
        return SegIntersection::At(a1.clone());
    }
    if d2 == Sign::Zero && point_on_segment(a2, b1, b2) {
        return SegIntersection::At(a2.clone());
    }
    if d3 == Sign::Zero && point_on_segment(b1, a1, a2) {
        return SegIntersection::At(b1.clone());
    }
    if d4 == Sign::Zero && point_on_segment(b2, a1, a2) {
        return SegIntersection::At(b2.clone());
    }
    SegIntersection::None
}

/// Squared distance from a point to a closed segment.
pub fn point_segment_distance2(p: &Point, a: &Point, b: &Point) -> Scalar {
    let len2 = distance2(a, b);
    if len2.is_zero() {
        return distance2(p, a);
    }
    let dot = &(&(&p.x - &a.x) * &(&b.x - &a.x)) + &(&(&p.y - &a.y) * &(&b.y - &a.y));
    if dot.is_negative() {
        return distance2(p, a);
    }
    if dot > len2 {
        return distance2(p, b);
    }
    let t = &dot / &len2;
    distance2(p, &point_at(a, b, &t))
}

/// Squared distance between two closed segments (0 when they intersect).
pub fn segment_distance2(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> Scalar {
    if segment_intersection(a1, a2, b1, b2) != SegIntersection::None {
        return Scalar::zero();
    }
    let candidates = [
        point_segment_distance2(a1, b1, b2),
        point_segment_distance2(a2, b1, b2),
        point_segment_distance2(b1, a1, a2),
        point_segment_distance2(b2, a1, a2),
    ];
    candidates.into_iter().reduce(Scalar::min).unwrap()
}

/// A strictly positive squared radius.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SquaredRadius(Scalar);

impl SquaredRadius {
    pub fn new(value: Scalar) -> Result<SquaredRadius, GeometryError> {
        if value.is_positive() {
            Ok(SquaredRadius(value))
        } else {
            Err(GeometryError::NonPositiveRadius { value })
        }
    }

    pub fn ratio(num: i64, den: i64) -> SquaredRadius {
        SquaredRadius::new(Scalar::ratio(num, den)).expect("positive squared radius")
    }

    pub fn value(&self) -> &Scalar {
        &self.0
    }

    pub fn into_value(self) -> Scalar {
        self.0
    }
}

impl fmt::Debug for SquaredRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r2={}", self.0)
    }
}

impl<'de> Deserialize<'de> for SquaredRadius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Scalar::deserialize(d)?;
        SquaredRadius::new(v).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// Coefficients of the squared distance `f^2(t) = a t^2 + b t + c` from a
/// fixed center to the point at parameter `t` of a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialProfile {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl RadialProfile {
    pub fn eval(&self, t: &Scalar) -> Scalar {
        &(&self.a * &t.square()) + &(&self.b * t) + self.c.clone()
    }

    /// Sign of `f^2(t) - r2` at an exact parameter.
    pub fn side_sign(&self, r2: &Scalar, t: &Param) -> Sign {
        quad_sign_at(&self.a, &self.b, &(&self.c - r2), t)
    }

    /// Interior extremum `(t*, f^2(t*))` of the profile when `t*` lies
    /// strictly inside `(0, 1)`.
    pub fn interior_extremum(&self) -> Option<(Scalar, Scalar)> {
        if !self.a.is_positive() {
            return None;
        }
        let t = &(-&self.b) / &(&self.a + &self.a);
        if t.is_positive() && t < Scalar::one() {
            let v = self.eval(&t);
            Some((t, v))
        } else {
            None
        }
    }
}

/// Errors from the geometric kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints coincide at {0:?}")]
    DegenerateSegment(Point),
    #[error("squared radius must be positive, got {value}")]
    NonPositiveRadius { value: Scalar },
}

/// Squared distance profile of the segment `[start, end]` seen from `center`.
pub fn radial_profile(
    start: &Point,
    end: &Point,
    center: &Point,
) -> Result<RadialProfile, GeometryError> {
    if start == end {
        return Err(GeometryError::DegenerateSegment(start.clone()));
    }
    let vx = &end.x - &start.x;
    let vy = &end.y - &start.y;
    let dx = &start.x - &center.x;
    let dy = &start.y - &center.y;
    let a = vx.square() + vy.square();
    let b = &(&(&dx * &vx) + &(&dy * &vy)) * &Scalar::from_int(2);
    let c = dx.square() + dy.square();
    Ok(RadialProfile { a, b, c })
}

/// Side of the circle on an open side of an event, or `Boundary` when the
/// parameter range ends there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideSign {
    Inside,
    Outside,
    Boundary,
}

impl SideSign {
    fn of(sign: Sign) -> SideSign {
        match sign {
            Sign::Neg => SideSign::Inside,
            Sign::Pos => SideSign::Outside,
            Sign::Zero => unreachable!("sample taken on the circle"),
        }
    }
}

/// One solution component of `f^2(t) = r2` on a parameter range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegComponent {
    Crossing(SegEvent),
    /// Positive-length solution set; impossible for profiles of
    /// non-degenerate segments, kept for totality.
    Overlap { t0: Param, t1: Param },
}

/// A single-parameter solution with the circle side on each flank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegEvent {
    pub t: Param,
    pub before: SideSign,
    pub after: SideSign,
}

/// Connected components of `{t in [0,1] : f^2(t) = r2}` with flank signs.
pub fn circle_segment_events(profile: &RadialProfile, r2: &SquaredRadius) -> Vec<SegComponent> {
    circle_segment_events_in(profile, r2, &Param::zero(), &Param::one())
}

/// Same as [`circle_segment_events`] on a restricted closed range.
pub fn circle_segment_events_in(
    profile: &RadialProfile,
    r2: &SquaredRadius,
    lo: &Param,
    hi: &Param,
) -> Vec<SegComponent> {
    debug_assert!(lo < hi);
    let shifted_c = &profile.c - r2.value();
    let roots = match solve_quadratic(&profile.a, &profile.b, &shifted_c) {
        QuadSolutions::AllOfLine => {
            return vec![SegComponent::Overlap {
                t0: lo.clone(),
                t1: hi.clone(),
            }]
        }
        QuadSolutions::Roots(r) => r,
    };
    let in_range: Vec<Param> = roots
        .into_iter()
        .filter(|t| t >= lo && t <= hi)
        .collect();
    if in_range.is_empty() {
        return vec![];
    }
    let mut events = Vec::with_capacity(in_range.len());
    for (i, t) in in_range.iter().enumerate() {
        let before = if t == lo {
            SideSign::Boundary
        } else {
            let prev = if i == 0 { lo } else { &in_range[i - 1] };
            let sample = rational_between(prev, t);
            SideSign::of(profile.side_sign(r2.value(), &Param::Rat(sample)))
        };
        let after = if t == hi {
            SideSign::Boundary
        } else {
            let next = if i + 1 == in_range.len() {
                hi
            } else {
                &in_range[i + 1]
            };
            let sample = rational_between(t, next);
            SideSign::of(profile.side_sign(r2.value(), &Param::Rat(sample)))
        };
        events.push(SegComponent::Crossing(SegEvent {
            t: t.clone(),
            before,
            after,
        }));
    }
    events
}

/// The finite set of squared radii at which a circle about `center` can meet
/// the given arcs non-transversally: squared distances to polyline vertices
/// and to interior radial extrema of each segment.
pub fn critical_radii(arcs: &[PolyArc], center: &Point) -> BTreeSet<SquaredRadius> {
    let mut out = BTreeSet::new();
    for arc in arcs {
        for v in arc.active_vertices() {
            let d2 = distance2(v, center);
            if d2.is_positive() {
                out.insert(SquaredRadius(d2));
            }
        }
        for seg in arc.segments() {
            let profile = radial_profile(seg.start, seg.end, center).expect("valid arc segment");
            if let Some((t, value)) = profile.interior_extremum() {
                let t = Param::Rat(t);
                if t > seg.lo && t < seg.hi && value.is_positive() {
                    out.insert(SquaredRadius(value));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn profile_examples() {
        let p = radial_profile(&pt(-2, 0), &pt(2, 0), &pt(0, 0)).unwrap();
        assert_eq!(
            (p.a, p.b, p.c),
            (Scalar::from_int(16), Scalar::from_int(-16), Scalar::from_int(4))
        );
        let p = radial_profile(&pt(-1, -1), &pt(0, 1), &pt(0, 0)).unwrap();
        assert_eq!(
            (p.a, p.b, p.c),
            (Scalar::from_int(5), Scalar::from_int(-6), Scalar::from_int(2))
        );
        let p = radial_profile(&pt(0, 0), &pt(0, 1), &pt(0, 0)).unwrap();
        assert_eq!(
            (p.a, p.b, p.c),
            (Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0))
        );
        assert!(matches!(
            radial_profile(&pt(1, 1), &pt(1, 1), &pt(0, 0)),
            Err(GeometryError::DegenerateSegment(_))
        ));
    }

    #[test]
    fn profile_matches_direct_distance() {
        let p = radial_profile(&pt(-1, -1), &pt(0, 1), &pt(3, 2)).unwrap();
        for t in [Scalar::ratio(1, 3), Scalar::ratio(7, 11), Scalar::zero()] {
            let at = point_at(&pt(-1, -1), &pt(0, 1), &t);
            assert_eq!(p.eval(&t), distance2(&at, &pt(3, 2)));
        }
    }

    #[test]
    fn event_examples() {
        let p = radial_profile(&pt(-1, -1), &pt(0, 1), &pt(0, 0)).unwrap();
        let ev = circle_segment_events(&p, &SquaredRadius::ratio(1, 1));
        assert_eq!(ev.len(), 2);
        match &ev[0] {
            SegComponent::Crossing(e) => {
                assert_eq!(e.t, Param::rat(1, 5));
                assert_eq!((e.before, e.after), (SideSign::Outside, SideSign::Inside));
            }
            other => panic!("unexpected {other:?}"),
        }
        match &ev[1] {
            SegComponent::Crossing(e) => {
                assert_eq!(e.t, Param::rat(1, 1));
                assert_eq!((e.before, e.after), (SideSign::Inside, SideSign::Boundary));
            }
            other => panic!("unexpected {other:?}"),
        }

        let ev = circle_segment_events(&p, &SquaredRadius::ratio(2, 5));
        let ts: Vec<_> = ev
            .iter()
            .map(|c| match c {
                SegComponent::Crossing(e) => (e.t.clone(), e.before, e.after),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(
            ts,
            vec![
                (Param::rat(2, 5), SideSign::Outside, SideSign::Inside),
                (Param::rat(4, 5), SideSign::Inside, SideSign::Outside),
            ]
        );

        let ev = circle_segment_events(&p, &SquaredRadius::ratio(1, 10));
        assert!(ev.is_empty());
    }

    #[test]
    fn tangency_has_outside_flanks() {
        // segment [(-1,1),(1,1)] touches r2=1 at t=1/2 from outside
        let p = radial_profile(&pt(-1, 1), &pt(1, 1), &pt(0, 0)).unwrap();
        let ev = circle_segment_events(&p, &SquaredRadius::ratio(1, 1));
        assert_eq!(ev.len(), 1);
        match &ev[0] {
            SegComponent::Crossing(e) => {
                assert_eq!(e.t, Param::rat(1, 2));
                assert_eq!((e.before, e.after), (SideSign::Outside, SideSign::Outside));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn intersection_witnesses() {
        // crossing segments meet at (1,0)
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(2, 0), &pt(1, -1), &pt(1, 1)),
            SegIntersection::At(pt(1, 0))
        );
        // collinear overlap
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(2, 0), &pt(1, 0), &pt(3, 0)),
            SegIntersection::Overlap(pt(1, 0), pt(2, 0))
        );
        // shared endpoint only
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(1, 0), &pt(1, 0), &pt(1, 1)),
            SegIntersection::At(pt(1, 0))
        );
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)),
            SegIntersection::None
        );
    }

    #[test]
    fn distances() {
        assert_eq!(
            point_segment_distance2(&pt(0, 0), &pt(1, -1), &pt(1, 1)),
            Scalar::from_int(1)
        );
        assert_eq!(
            segment_distance2(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)),
            Scalar::from_int(1)
        );
    }
}

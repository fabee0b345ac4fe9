//! Circular order of a fence's intersection with a circle.
//!
//! Cutting the circle at a radial ray that misses the fence turns the
//! intersection points into a totally ordered list; a bend separates a
//! boundary point from infinity exactly when that point sits strictly
//! between the bend's endpoints in this order.
//!
//! Directions are exact rational vectors. Crossing points with irrational
//! parameters are compared through shrinking angular cones: the angle along
//! a segment is monotone in the parameter, so a parameter bracket yields a
//! direction cone, and distinct points separate after finitely many
//! bisections.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::Param;
use crate::geometry::{distance2, point_at, Point, SquaredRadius};
use crate::model::Fence;
use crate::probe::{
    classify_target, ArcPos, Bend, CircleProbe, ComponentRef, CrossingEvent, EventKind,
    ProbeError, ProbeTarget,
};
use crate::scalar::{Scalar, Sign};

/// A nonzero rational direction, kept as a primitive integer vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Dir {
    pub x: Scalar,
    pub y: Scalar,
}

impl Dir {
    pub fn new(x: Scalar, y: Scalar) -> Dir {
        assert!(!(x.is_zero() && y.is_zero()), "zero direction");
        Dir { x, y }.canonical()
    }

    pub fn from_ints(x: i64, y: i64) -> Dir {
        Dir::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    /// Direction from `from` towards `to`.
    pub fn towards(from: &Point, to: &Point) -> Dir {
        Dir::new(&to.x - &from.x, &to.y - &from.y)
    }

    fn canonical(self) -> Dir {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let lcm = self.x.denom().lcm(self.y.denom());
        let ix = self.x.numer() * (&lcm / self.x.denom());
        let iy = self.y.numer() * (&lcm / self.y.denom());
        let g = ix.gcd(&iy);
        Dir {
            x: Scalar::from_big(&ix / &g, BigInt::from(1)),
            y: Scalar::from_big(&iy / &g, BigInt::from(1)),
        }
    }

    pub fn opposite(&self) -> Dir {
        Dir {
            x: -&self.x,
            y: -&self.y,
        }
    }

    fn rot90(&self) -> Dir {
        Dir {
            x: -&self.y,
            y: self.x.clone(),
        }
    }
}

fn cross(u: &Dir, v: &Dir) -> Scalar {
    &(&u.x * &v.y) - &(&u.y * &v.x)
}

fn dot(u: &Dir, v: &Dir) -> Scalar {
    &(&u.x * &v.x) + &(&u.y * &v.y)
}

pub fn same_dir(u: &Dir, v: &Dir) -> bool {
    cross(u, v).is_zero() && dot(u, v).is_positive()
}

/// Rank of the counterclockwise angle from `u` to `v` in `[0, 2pi)`:
/// class 0 = zero angle, 1 = (0, pi), 2 = pi, 3 = (pi, 2pi).
fn angle_class(u: &Dir, v: &Dir) -> u8 {
    let s = cross(u, v);
    match s.sign() {
        Sign::Pos => 1,
        Sign::Neg => 3,
        Sign::Zero => {
            if dot(u, v).is_positive() {
                0
            } else {
                2
            }
        }
    }
}

/// Compare the CCW angles `u1 -> v1` and `u2 -> v2` exactly.
pub fn angle_size_cmp(u1: &Dir, v1: &Dir, u2: &Dir, v2: &Dir) -> Ordering {
    let c1 = angle_class(u1, v1);
    let c2 = angle_class(u2, v2);
    if c1 != c2 {
        return c1.cmp(&c2);
    }
    match c1 {
        0 | 2 => Ordering::Equal,
        1 => {
            // cot is strictly decreasing on (0, pi); sines are positive
            let (d1, s1) = (dot(u1, v1), cross(u1, v1));
            let (d2, s2) = (dot(u2, v2), cross(u2, v2));
            (&d2 * &s1).cmp(&(&d1 * &s2))
        }
        _ => {
            // theta = 2pi - phi with phi in (0, pi) and sin(phi) = -cross
            let (d1, s1) = (dot(u1, v1), -cross(u1, v1));
            let (d2, s2) = (dot(u2, v2), -cross(u2, v2));
            (&d1 * &s2).cmp(&(&d2 * &s1))
        }
    }
}

/// Whether `w` lies in the closed CCW arc from `s` to `e`.
fn in_ccw_closed(s: &Dir, e: &Dir, w: &Dir) -> bool {
    angle_size_cmp(s, w, s, e) != Ordering::Greater
}

/// Compare two directions by CCW angle measured from `ray`.
fn ccw_cmp_from(ray: &Dir, u: &Dir, v: &Dir) -> Ordering {
    angle_size_cmp(ray, u, ray, v)
}

/// A rational direction strictly inside the CCW gap from `u` to `v`.
/// When `u` and `v` coincide the gap is the full punctured circle.
fn dir_inside_gap(u: &Dir, v: &Dir) -> Dir {
    let s = cross(u, v);
    match s.sign() {
        Sign::Pos => Dir::new(&u.x + &v.x, &u.y + &v.y),
        Sign::Neg => Dir::new(-(&u.x + &v.x), -(&u.y + &v.y)),
        Sign::Zero => {
            if dot(u, v).is_positive() {
                u.opposite()
            } else {
                u.rot90()
            }
        }
    }
}

/// Exact angular position of a point of the fence on the probe circle.
#[derive(Debug, Clone)]
enum PointAngle {
    Exact(Dir),
    /// Crossing at an irrational parameter of `[a, b]` seen from `center`:
    /// the direction cone of the current parameter bracket.
    Cone {
        a: Point,
        b: Point,
        center: Point,
        t: Param,
        /// angle increases with the parameter
        ccw: bool,
        plo: Scalar,
        phi: Scalar,
    },
}

impl PointAngle {
    fn of(a: &Point, b: &Point, center: &Point, t: &Param) -> PointAngle {
        match t {
            Param::Rat(x) => {
                let p = point_at(a, b, x);
                PointAngle::Exact(Dir::towards(center, &p))
            }
            Param::Root(root) => {
                let u = Dir::towards(center, a);
                let seg = Dir::new(&b.x - &a.x, &b.y - &a.y);
                let sigma = cross(&u, &seg);
                if sigma.is_zero() {
                    // radial segment: the direction is +-seg; refine until the
                    // bracket leaves the center behind
                    let (mut lo, mut hi) = root.bracket();
                    loop {
                        let dlo = point_at(a, b, &lo);
                        let dhi = point_at(a, b, &hi);
                        let s_lo = dot(&Dir { x: &dlo.x - &center.x, y: &dlo.y - &center.y }, &seg);
                        let s_hi = dot(&Dir { x: &dhi.x - &center.x, y: &dhi.y - &center.y }, &seg);
                        if !s_lo.is_zero() && s_lo.sign() == s_hi.sign() {
                            return PointAngle::Exact(if s_lo.is_positive() {
                                seg
                            } else {
                                seg.opposite()
                            });
                        }
                        let mid = Scalar::midpoint(&lo, &hi);
                        match root.cmp_rat(&mid) {
                            Ordering::Less => hi = mid,
                            Ordering::Greater => lo = mid,
                            Ordering::Equal => unreachable!(),
                        }
                    }
                } else {
                    let (plo, phi) = root.bracket();
                    PointAngle::Cone {
                        a: a.clone(),
                        b: b.clone(),
                        center: center.clone(),
                        t: t.clone(),
                        ccw: sigma.is_positive(),
                        plo,
                        phi,
                    }
                }
            }
        }
    }

    /// Current direction cone (degenerate for exact points), CCW.
    fn cone(&self) -> (Dir, Dir) {
        match self {
            PointAngle::Exact(d) => (d.clone(), d.clone()),
            PointAngle::Cone {
                a,
                b,
                center,
                ccw,
                plo,
                phi,
                ..
            } => {
                let dl = point_at(a, b, plo);
                let dh = point_at(a, b, phi);
                let u = Dir::towards(center, &dl);
                let v = Dir::towards(center, &dh);
                if *ccw {
                    (u, v)
                } else {
                    (v, u)
                }
            }
        }
    }

    fn refine(&mut self) -> bool {
        match self {
            PointAngle::Exact(_) => false,
            PointAngle::Cone { t, plo, phi, .. } => {
                let Param::Root(root) = t else { unreachable!() };
                let mid = Scalar::midpoint(plo, phi);
                match root.cmp_rat(&mid) {
                    Ordering::Less => *phi = mid,
                    Ordering::Greater => *plo = mid,
                    Ordering::Equal => unreachable!(),
                }
                true
            }
        }
    }
}

fn cones_separated(a: &PointAngle, b: &PointAngle) -> bool {
    let (a_lo, a_hi) = a.cone();
    let (b_lo, b_hi) = b.cone();
    !in_ccw_closed(&a_lo, &a_hi, &b_lo)
        && !in_ccw_closed(&a_lo, &a_hi, &b_hi)
        && !in_ccw_closed(&b_lo, &b_hi, &a_lo)
}

fn cone_contains(p: &PointAngle, d: &Dir) -> bool {
    let (lo, hi) = p.cone();
    in_ccw_closed(&lo, &hi, d)
}

/// A member of the cut order with enough geometry to re-derive its angle.
#[derive(Debug, Clone, Serialize)]
pub struct OrderedCirclePoint {
    pub component: ComponentRef,
    pub pos: Option<ArcPos>,
    #[serde(skip)]
    geom: PointGeom,
}

#[derive(Debug, Clone)]
enum PointGeom {
    Exact(Dir),
    OnSegment { a: Point, b: Point },
}

impl OrderedCirclePoint {
    fn angle(&self, center: &Point) -> PointAngle {
        match &self.geom {
            PointGeom::Exact(d) => PointAngle::Exact(d.clone()),
            PointGeom::OnSegment { a, b } => {
                let t = &self.pos.as_ref().unwrap().t;
                PointAngle::of(a, b, center, t)
            }
        }
    }
}

/// The total order on the circle's fence points, cut at `ray`.
#[derive(Debug, Clone, Serialize)]
pub struct CutOrder {
    pub circle: CircleProbe,
    pub ray: Dir,
    /// Counterclockwise, starting immediately after the ray.
    pub points: Vec<OrderedCirclePoint>,
}

/// Where a direction lands relative to the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaLocation {
    AtPoint(usize),
    /// `rank` = number of order members strictly before the direction.
    Between(usize),
}

fn event_geometry(target: ProbeTarget<'_>, center: &Point, e: &CrossingEvent) -> PointGeom {
    match (e.component, &e.pos) {
        (ComponentRef::Point(idx), _) => {
            PointGeom::Exact(Dir::towards(center, &target.points[idx]))
        }
        (ComponentRef::Arc(idx), Some(pos)) => {
            let vs = target.arcs[idx].vertices();
            let (a, b) = (&vs[pos.seg], &vs[pos.seg + 1]);
            match &pos.t {
                Param::Rat(t) => PointGeom::Exact(Dir::towards(center, &point_at(a, b, t))),
                Param::Root(_) => PointGeom::OnSegment {
                    a: a.clone(),
                    b: b.clone(),
                },
            }
        }
        _ => unreachable!("arc events carry positions"),
    }
}

/// Search for a radial ray direction that misses the fence at squared
/// distance `>= q2`, then list the circle points counterclockwise after it.
pub fn cut_order(fence: &Fence, circle: &CircleProbe) -> Result<CutOrder, ProbeError> {
    let target: ProbeTarget<'_> = fence.into();
    let ray = find_radial_ray(target, &circle.center, &circle.r2)?;
    cut_order_along(target, circle, ray)
}

/// Build the order for a caller-supplied escape ray (the override hook for
/// fences that block every radial direction). The ray is still verified.
pub fn cut_order_with_ray(
    fence: &Fence,
    circle: &CircleProbe,
    ray: Dir,
) -> Result<CutOrder, ProbeError> {
    let target: ProbeTarget<'_> = fence.into();
    if !ray_is_clear(target, &circle.center, &circle.r2, &ray) {
        return Err(ProbeError::NoRadialRay);
    }
    cut_order_along(target, circle, ray)
}

fn cut_order_along(
    target: ProbeTarget<'_>,
    circle: &CircleProbe,
    ray: Dir,
) -> Result<CutOrder, ProbeError> {
    let events = classify_target(target, circle);
    if events.iter().any(|e| e.kind == EventKind::Overlap) {
        return Err(ProbeError::OverlapAtRadius);
    }
    let mut members: Vec<(OrderedCirclePoint, PointAngle)> = events
        .iter()
        .map(|e| {
            let geom = event_geometry(target, &circle.center, e);
            let point = OrderedCirclePoint {
                component: e.component,
                pos: e.pos.clone(),
                geom,
            };
            let angle = point.angle(&circle.center);
            (point, angle)
        })
        .collect();

    // refine until every cone misses the ray and all cones are pairwise
    // separated; distinct points have distinct angles, so this terminates
    loop {
        let mut changed = false;
        for (_, angle) in members.iter_mut() {
            while cone_contains(angle, &ray) {
                let refined = angle.refine();
                assert!(refined, "exact point collides with the cut ray");
                changed = true;
            }
        }
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                while !cones_separated(&members[i].1, &members[j].1) {
                    let a = members[i].1.refine();
                    let b = members[j].1.refine();
                    assert!(a || b, "distinct circle points share a direction");
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    members.sort_by(|(_, pa), (_, pb)| {
        let (a_lo, _) = pa.cone();
        let (b_lo, _) = pb.cone();
        ccw_cmp_from(&ray, &a_lo, &b_lo)
    });
    Ok(CutOrder {
        circle: circle.clone(),
        ray,
        points: members.into_iter().map(|(p, _)| p).collect(),
    })
}

/// Angular occupancy of the fence outside the open disc, as closed cones.
fn occupancy_cones(target: ProbeTarget<'_>, center: &Point, q2: &SquaredRadius) -> Vec<(Dir, Dir)> {
    let mut cones = Vec::new();
    for arc in target.arcs {
        for seg in arc.segments() {
            // a segment entirely inside the open disc blocks nothing
            let da = distance2(seg.start, center);
            let db = distance2(seg.end, center);
            if &da < q2.value() && &db < q2.value() {
                continue;
            }
            if seg.start == center || seg.end == center {
                let other = if seg.start == center { seg.end } else { seg.start };
                let d = Dir::towards(center, other);
                cones.push((d.clone(), d));
                continue;
            }
            let u = Dir::towards(center, seg.start);
            let v = Dir::towards(center, seg.end);
            let s = cross(&u, &v);
            match s.sign() {
                Sign::Pos => cones.push((u, v)),
                Sign::Neg => cones.push((v, u)),
                Sign::Zero => {
                    if dot(&u, &v).is_positive() {
                        cones.push((u.clone(), u));
                    } else {
                        // the segment passes through the center
                        cones.push((u.clone(), u));
                        cones.push((v.clone(), v));
                    }
                }
            }
        }
    }
    for p in target.points {
        if p == center {
            continue;
        }
        if &distance2(p, center) >= q2.value() {
            let d = Dir::towards(center, p);
            cones.push((d.clone(), d));
        }
    }
    cones
}

/// Merge closed cones on the circle into disjoint maximal occupied arcs.
fn merge_cones(mut cones: Vec<(Dir, Dir)>, anchor: &Dir) -> Vec<(Dir, Dir)> {
    cones.sort_by(|(a, _), (b, _)| ccw_cmp_from(anchor, a, b));
    let mut merged: Vec<(Dir, Dir)> = Vec::new();
    for (s, e) in cones {
        if let Some((cs, ce)) = merged.last_mut() {
            if in_ccw_closed(cs, ce, &s) {
                // extend if the new end reaches further from the arc start
                if angle_size_cmp(cs, &e, cs, ce) == Ordering::Greater {
                    *ce = e;
                }
                continue;
            }
        }
        merged.push((s, e));
    }
    // wrap: the last arc may swallow the first ones
    while merged.len() > 1 {
        let (ls, le) = merged.last().unwrap().clone();
        let (fs, fe) = merged[0].clone();
        if in_ccw_closed(&ls, &le, &fs) {
            if !in_ccw_closed(&ls, &le, &fe) {
                merged[0] = (ls, fe);
                merged.pop();
            } else {
                // first arc wholly inside the last
                merged.remove(0);
            }
        } else {
            break;
        }
    }
    merged
}

fn find_radial_ray(
    target: ProbeTarget<'_>,
    center: &Point,
    q2: &SquaredRadius,
) -> Result<Dir, ProbeError> {
    let anchor = Dir::from_ints(1, 0);
    let cones = occupancy_cones(target, center, q2);
    if cones.is_empty() {
        return Ok(anchor);
    }
    let merged = merge_cones(cones, &anchor);
    // gaps between consecutive occupied arcs (wrapping)
    let mut gaps: Vec<(Dir, Dir)> = Vec::new();
    for i in 0..merged.len() {
        let end = merged[i].1.clone();
        let start = merged[(i + 1) % merged.len()].0.clone();
        if merged.len() == 1 {
            gaps.push((end, start));
        } else if !same_dir(&end, &start) {
            gaps.push((end, start));
        }
    }
    // deterministic preference: widest gap first, then start direction
    gaps.sort_by(|(u1, v1), (u2, v2)| {
        angle_size_cmp(u2, v2, u1, v1)
            .then_with(|| ccw_cmp_from(&anchor, u1, u2))
    });
    for (u, v) in &gaps {
        let candidate = dir_inside_gap(u, v);
        if ray_is_clear(target, center, q2, &candidate) {
            return Ok(candidate);
        }
    }
    Err(ProbeError::NoRadialRay)
}

/// Exact check that the outward ray from the circle misses the fence at
/// squared distance `>= q2`.
pub(crate) fn ray_is_clear(
    target: ProbeTarget<'_>,
    center: &Point,
    q2: &SquaredRadius,
    dir: &Dir,
) -> bool {
    let blocked_at = |p: &Point| -> bool {
        let to = Dir {
            x: &p.x - &center.x,
            y: &p.y - &center.y,
        };
        if !cross(&to, dir).is_zero() || !dot(&to, dir).is_positive() {
            return false;
        }
        &distance2(p, center) >= q2.value()
    };
    for arc in target.arcs {
        for seg in arc.segments() {
            let sd = Dir {
                x: &seg.end.x - &seg.start.x,
                y: &seg.end.y - &seg.start.y,
            };
            let denom = cross(dir, &sd);
            if denom.is_zero() {
                if blocked_at(seg.start) || blocked_at(seg.end) {
                    return false;
                }
                continue;
            }
            let sa = Dir {
                x: &seg.start.x - &center.x,
                y: &seg.start.y - &center.y,
            };
            // cross(A - c, dir) + t cross(B - A, dir) = 0 with
            // cross(B - A, dir) = -denom
            let t = &cross(&sa, dir) / &denom;
            if t.is_negative() || t > Scalar::one() {
                continue;
            }
            let p = point_at(seg.start, seg.end, &t);
            if blocked_at(&p) {
                return false;
            }
        }
    }
    for p in target.points {
        if blocked_at(p) {
            return false;
        }
    }
    true
}

impl CutOrder {
    /// Index of a circle point in the order.
    pub fn position_of(&self, component: ComponentRef, pos: Option<&ArcPos>) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.component == component && p.pos.as_ref() == pos)
    }

    /// Locate a rational direction (a point of the circle) in the order.
    pub fn locate(&self, theta: &Dir) -> ThetaLocation {
        let center = &self.circle.center;
        let mut rank = 0usize;
        for (i, p) in self.points.iter().enumerate() {
            let mut angle = p.angle(center);
            if let PointAngle::Exact(d) = &angle {
                if same_dir(d, theta) {
                    return ThetaLocation::AtPoint(i);
                }
            }
            while cone_contains(&angle, theta) || cone_contains(&angle, &self.ray) {
                let refined = angle.refine();
                assert!(refined, "rational direction equals an exact member");
            }
            let (lo, _) = angle.cone();
            if ccw_cmp_from(&self.ray, &lo, theta) == Ordering::Less {
                rank += 1;
            }
        }
        ThetaLocation::Between(rank)
    }
}

/// Whether the bend separates the circle point in direction `theta` from
/// infinity: true exactly when theta lies strictly between the bend's
/// endpoints in the cut order of the terminating circle.
pub fn separates_from_infinity(
    bend: &Bend,
    theta: &Dir,
    order: &CutOrder,
) -> Result<bool, ProbeError> {
    if order.circle.r2 != bend.q2 {
        return Err(ProbeError::WrongCircle);
    }
    let ia = order
        .position_of(ComponentRef::Arc(bend.arc), Some(&bend.start))
        .ok_or(ProbeError::WrongCircle)?;
    let ib = order
        .position_of(ComponentRef::Arc(bend.arc), Some(&bend.end))
        .ok_or(ProbeError::WrongCircle)?;
    let (ia, ib) = (ia.min(ib), ia.max(ib));
    match order.locate(theta) {
        ThetaLocation::AtPoint(k) => {
            if k == ia || k == ib {
                Err(ProbeError::ThetaOnBend)
            } else {
                Ok(ia < k && k < ib)
            }
        }
        ThetaLocation::Between(rank) => Ok(ia < rank && rank <= ib),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SquaredRadius;
    use crate::model::{generate, validate_fence, Family, ModelPayload};
    use crate::probe::{find_bends, AnnulusProbe};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn v_bump() -> Fence {
        match generate(&Family::VBump).unwrap() {
            ModelPayload::Fence(f) => f,
            _ => unreachable!(),
        }
    }

    fn q_probe() -> CircleProbe {
        CircleProbe {
            center: pt(0, 0),
            r2: SquaredRadius::ratio(2, 5),
        }
    }

    #[test]
    fn angle_comparisons() {
        let e = Dir::from_ints(1, 0);
        let n = Dir::from_ints(0, 1);
        let w = Dir::from_ints(-1, 0);
        let s = Dir::from_ints(0, -1);
        assert_eq!(ccw_cmp_from(&e, &n, &w), Ordering::Less);
        assert_eq!(ccw_cmp_from(&e, &s, &w), Ordering::Greater);
        assert_eq!(angle_size_cmp(&e, &n, &n, &w), Ordering::Equal);
        assert_eq!(angle_size_cmp(&e, &n, &e, &w), Ordering::Less);
        assert!(in_ccw_closed(&e, &w, &n));
        assert!(!in_ccw_closed(&e, &n, &w));
    }

    #[test]
    fn v_bump_cut_order_matches_angles() {
        let order = cut_order(&v_bump(), &q_probe()).unwrap();
        assert_eq!(order.ray, Dir::from_ints(0, -1));
        let expected = [
            ArcPos::new(0, Param::rat(2, 5)),  // (-3/5, -1/5), 198.4 deg
            ArcPos::new(0, Param::rat(4, 5)),  // (-1/5, 3/5), 108.4 deg
            ArcPos::new(1, Param::rat(1, 5)),  // (1/5, 3/5), 71.6 deg
            ArcPos::new(1, Param::rat(3, 5)),  // (3/5, -1/5), 341.6 deg
        ];
        // counterclockwise from straight down: 341.6, 71.6, 108.4, 198.4
        let got: Vec<&ArcPos> = order.points.iter().map(|p| p.pos.as_ref().unwrap()).collect();
        assert_eq!(
            got,
            vec![&expected[3], &expected[2], &expected[1], &expected[0]]
        );
    }

    #[test]
    fn single_point_order() {
        let fence = validate_fence(vec![], vec![pt(2, 0)]).unwrap();
        let order = cut_order(
            &fence,
            &CircleProbe {
                center: pt(0, 0),
                r2: SquaredRadius::ratio(4, 1),
            },
        )
        .unwrap();
        assert_eq!(order.points.len(), 1);
        assert_eq!(order.points[0].component, ComponentRef::Point(0));
    }

    #[test]
    fn two_point_order_on_segment() {
        let fence = validate_fence(vec![vec![pt(-1, 0), pt(1, 0)]], vec![]).unwrap();
        let order = cut_order(
            &fence,
            &CircleProbe {
                center: pt(0, 0),
                r2: SquaredRadius::ratio(1, 4),
            },
        )
        .unwrap();
        assert_eq!(order.points.len(), 2);
    }

    #[test]
    fn separation_examples() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(2, 5), SquaredRadius::ratio(1, 1))
                .unwrap();
        let bend = find_bends(&f, &annulus).unwrap().remove(0);
        let order = cut_order(&f, &q_probe()).unwrap();
        // top of the circle lies under the apex bend
        assert_eq!(
            separates_from_infinity(&bend, &Dir::from_ints(0, 1), &order).unwrap(),
            true
        );
        // the far side does not
        assert_eq!(
            separates_from_infinity(&bend, &Dir::from_ints(-1, 0), &order).unwrap(),
            false
        );
        // theta on an endpoint of the bend
        let err = separates_from_infinity(&bend, &Dir::from_ints(-1, 3), &order).unwrap_err();
        assert_eq!(err, ProbeError::ThetaOnBend);
    }

    #[test]
    fn irrational_endpoints_order_exactly() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(1, 2), SquaredRadius::ratio(1, 1))
                .unwrap();
        let bend = find_bends(&f, &annulus).unwrap().remove(0);
        let order = cut_order(
            &f,
            &CircleProbe {
                center: pt(0, 0),
                r2: SquaredRadius::ratio(1, 2),
            },
        )
        .unwrap();
        assert_eq!(order.points.len(), 4);
        assert_eq!(
            separates_from_infinity(&bend, &Dir::from_ints(0, 1), &order).unwrap(),
            true
        );
        assert_eq!(
            separates_from_infinity(&bend, &Dir::from_ints(1, 0), &order).unwrap(),
            false
        );
    }

    #[test]
    fn blocked_directions_are_rejected() {
        let f = v_bump();
        assert!(matches!(
            cut_order_with_ray(&f, &q_probe(), Dir::from_ints(0, 1)),
            Err(ProbeError::NoRadialRay)
        ));
        let order = cut_order_with_ray(&f, &q_probe(), Dir::from_ints(1, -4)).unwrap();
        assert_eq!(order.points.len(), 4);
    }
}

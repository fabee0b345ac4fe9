//! Piercing verification and certified pierced-neighborhood search.
//!
//! An open region (finite union of open balls) is pierced relative to a
//! fence when every fence point on the region's topological boundary is
//! crossed transversally by its arc, with arc endpoints and isolated points
//! passing vacuously (no arc runs through them). The certificate records one
//! verdict per boundary point; a failure carries the tangency witness.
//!
//! Searching for a pierced ball never fails: tangencies can only occur at
//! the finitely many critical radii, so the midpoint of the widest
//! critical-radius gap below epsilon gives an all-transversal circle.

use serde::Serialize;

use crate::algebra::Param;
use crate::geometry::{distance2, point_at, point_on_segment, radial_profile, Point, SquaredRadius};
use crate::model::{Fan, Fence};
use crate::probe::{
    classify_target, target_critical_radii, CircleProbe, ComponentRef, CrossingEvent,
    EventKind, ProbeTarget,
};
use crate::scalar::{Scalar, Sign};

/// A finite union of open balls, canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenRegion {
    balls: Vec<CircleProbe>,
}

impl OpenRegion {
    pub fn new(mut balls: Vec<CircleProbe>) -> OpenRegion {
        assert!(!balls.is_empty(), "region needs at least one ball");
        balls.sort_by(|a, b| {
            (&a.center, a.r2.value()).cmp(&(&b.center, b.r2.value()))
        });
        balls.dedup();
        OpenRegion { balls }
    }

    pub fn ball(center: Point, r2: SquaredRadius) -> OpenRegion {
        OpenRegion {
            balls: vec![CircleProbe { center, r2 }],
        }
    }

    pub fn balls(&self) -> &[CircleProbe] {
        &self.balls
    }
}

/// Passing verdict for one boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    TransversalCrossing,
    VacuousEndpoint,
    VacuousIsolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryVerdict {
    /// Index of the ball whose circle carries the point.
    pub ball: usize,
    pub event: CrossingEvent,
    pub verdict: Verdict,
}

/// Evidence that the region is pierced: one passing verdict per point of
/// the fence on the region boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiercingCertificate {
    pub region: OpenRegion,
    pub boundary: Vec<BoundaryVerdict>,
}

/// Side of the region on which the arc locally stays at the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StaysOn {
    Inside,
    Outside,
}

/// A replayable violation of the piercing condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiercingFailure {
    pub ball: usize,
    pub event: CrossingEvent,
    pub side: StaysOn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PiercingOutcome {
    Pierced(PiercingCertificate),
    NotPierced(PiercingFailure),
}

impl PiercingOutcome {
    pub fn is_pierced(&self) -> bool {
        matches!(self, PiercingOutcome::Pierced(_))
    }

    pub fn certificate(self) -> Option<PiercingCertificate> {
        match self {
            PiercingOutcome::Pierced(c) => Some(c),
            PiercingOutcome::NotPierced(_) => None,
        }
    }
}

/// Errors from piercing verification and region construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PierceError {
    #[error("a probe circle overlaps the fence along a sub-arc")]
    OverlapAtRadius,
    #[error("general position violated: {0}")]
    GeneralPositionViolated(String),
    #[error("could not reach general position after {attempts} shrink attempts")]
    GeneralPositionExhausted { attempts: usize },
    #[error("base point does not lie on the fan")]
    PointNotOnFan,
}

/// Exact location of an event point, for cross-ball membership tests.
enum EventPoint<'a> {
    OnSegment {
        a: &'a Point,
        b: &'a Point,
        t: &'a Param,
    },
    Exact(&'a Point),
}

fn event_point<'a>(target: &ProbeTarget<'a>, e: &'a CrossingEvent) -> EventPoint<'a> {
    match (e.component, &e.pos) {
        (ComponentRef::Point(i), _) => EventPoint::Exact(&target.points[i]),
        (ComponentRef::Arc(i), Some(pos)) => {
            let vs = target.arcs[i].vertices();
            EventPoint::OnSegment {
                a: &vs[pos.seg],
                b: &vs[pos.seg + 1],
                t: &pos.t,
            }
        }
        _ => unreachable!(),
    }
}

/// Sign of `dist^2(point, ball.center) - ball.r2` at an event point.
fn ball_side(target: &ProbeTarget<'_>, e: &CrossingEvent, ball: &CircleProbe) -> Sign {
    match event_point(target, e) {
        EventPoint::Exact(p) => (&distance2(p, &ball.center) - ball.r2.value()).sign(),
        EventPoint::OnSegment { a, b, t } => {
            let profile = radial_profile(a, b, &ball.center).expect("valid segment");
            profile.side_sign(ball.r2.value(), t)
        }
    }
}

/// Whether the event point is an endpoint of its arc.
fn is_arc_endpoint(target: &ProbeTarget<'_>, e: &CrossingEvent) -> bool {
    match (e.component, &e.pos) {
        (ComponentRef::Arc(i), Some(pos)) => {
            let arc = &target.arcs[i];
            arc.is_arc_start(pos.seg, &pos.t) || arc.is_arc_end(pos.seg, &pos.t)
        }
        _ => false,
    }
}

/// Whether the event point is the fan vertex.
fn is_fan_vertex(target: &ProbeTarget<'_>, e: &CrossingEvent) -> bool {
    let Some(v) = target.fan_vertex else {
        return false;
    };
    match (e.component, &e.pos) {
        (ComponentRef::Arc(i), Some(pos)) => {
            pos.seg == 0 && pos.t == Param::zero() && target.arcs[i].vertices()[0] == *v
        }
        _ => false,
    }
}

/// Verify the piercing condition for a region against a fence.
pub fn verify_pierced(fence: &Fence, region: &OpenRegion) -> Result<PiercingOutcome, PierceError> {
    verify_pierced_target(fence.into(), region)
}

pub(crate) fn verify_pierced_target(
    target: ProbeTarget<'_>,
    region: &OpenRegion,
) -> Result<PiercingOutcome, PierceError> {
    let balls = region.balls();
    let mut per_ball: Vec<Vec<CrossingEvent>> = Vec::with_capacity(balls.len());
    for ball in balls {
        let events = classify_target(target, ball);
        if events.iter().any(|e| e.kind == EventKind::Overlap) {
            return Err(PierceError::OverlapAtRadius);
        }
        per_ball.push(events);
    }
    // general position: distinct circles may not share a fence point
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            for e in &per_ball[i] {
                if per_ball[j]
                    .iter()
                    .any(|f| f.component == e.component && f.pos == e.pos)
                {
                    return Err(PierceError::GeneralPositionViolated(format!(
                        "circles {i} and {j} meet the fence at the same point ({:?})",
                        e.component
                    )));
                }
            }
        }
    }
    let mut boundary = Vec::new();
    for (i, events) in per_ball.iter().enumerate() {
        'events: for e in events {
            // drop points strictly inside another ball: not on the boundary
            for (j, other) in balls.iter().enumerate() {
                if j == i {
                    continue;
                }
                match ball_side(&target, e, other) {
                    Sign::Neg => continue 'events,
                    Sign::Zero => unreachable!("shared circle points already rejected"),
                    Sign::Pos => {}
                }
            }
            if is_fan_vertex(&target, e) {
                return Err(PierceError::GeneralPositionViolated(
                    "fan vertex lies on the region boundary".to_string(),
                ));
            }
            let verdict = match e.kind {
                EventKind::Transversal => Verdict::TransversalCrossing,
                EventKind::TangentInside => {
                    return Ok(PiercingOutcome::NotPierced(PiercingFailure {
                        ball: i,
                        event: e.clone(),
                        side: StaysOn::Inside,
                    }))
                }
                EventKind::TangentOutside => {
                    return Ok(PiercingOutcome::NotPierced(PiercingFailure {
                        ball: i,
                        event: e.clone(),
                        side: StaysOn::Outside,
                    }))
                }
                EventKind::EndpointTouch => {
                    if matches!(e.component, ComponentRef::Point(_)) {
                        Verdict::VacuousIsolated
                    } else {
                        debug_assert!(is_arc_endpoint(&target, e));
                        Verdict::VacuousEndpoint
                    }
                }
                EventKind::Overlap => unreachable!(),
            };
            boundary.push(BoundaryVerdict {
                ball: i,
                event: e.clone(),
                verdict,
            });
        }
    }
    Ok(PiercingOutcome::Pierced(PiercingCertificate {
        region: region.clone(),
        boundary,
    }))
}

/// Midpoint of the widest gap between critical radii inside `(0, limit)`.
/// Ties prefer the gap nearer zero. Total: the critical set is finite.
fn widest_gap_midpoint(crits: impl IntoIterator<Item = Scalar>, limit: &Scalar) -> Scalar {
    let mut cuts: Vec<Scalar> = crits
        .into_iter()
        .filter(|c| c.is_positive() && c < limit)
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut best_lo = Scalar::zero();
    let mut best_len = Scalar::zero();
    let mut prev = Scalar::zero();
    for c in cuts.iter().chain(std::iter::once(limit)) {
        let len = c - &prev;
        if len > best_len {
            best_len = len;
            best_lo = prev.clone();
        }
        prev = c.clone();
    }
    &best_lo + &best_len.half()
}

/// A certified pierced ball about `p` of squared radius below `epsilon2`.
///
/// The returned radius avoids every critical radius, so each crossing is
/// transversal and the certificate always passes.
pub fn pierced_ball(
    fence: &Fence,
    p: &Point,
    epsilon2: &SquaredRadius,
) -> (SquaredRadius, PiercingCertificate) {
    pierced_ball_target(fence.into(), p, epsilon2)
}

pub(crate) fn pierced_ball_target(
    target: ProbeTarget<'_>,
    p: &Point,
    epsilon2: &SquaredRadius,
) -> (SquaredRadius, PiercingCertificate) {
    let r2 = pierced_radius_target(target, p, epsilon2.value());
    let region = OpenRegion::ball(p.clone(), r2.clone());
    let outcome = verify_pierced_target(target, &region)
        .expect("single non-critical ball is in general position");
    match outcome {
        PiercingOutcome::Pierced(cert) => (r2, cert),
        PiercingOutcome::NotPierced(f) => {
            unreachable!("non-critical radius produced a tangency: {f:?}")
        }
    }
}

/// The radius selection alone (no certificate): midpoint of the widest
/// critical gap below the bound.
fn pierced_radius_target(target: ProbeTarget<'_>, p: &Point, limit: &Scalar) -> SquaredRadius {
    let crits = target_critical_radii(target, p);
    let r2 = widest_gap_midpoint(crits.into_iter().map(SquaredRadius::into_value), limit);
    SquaredRadius::new(r2).expect("gap midpoint is positive")
}

/// Exact test: closed balls disjoint, i.e. dist > r_a + r_b.
fn closures_disjoint(a: &CircleProbe, b: &CircleProbe) -> bool {
    let d2 = distance2(&a.center, &b.center);
    let l = &(&d2 - a.r2.value()) - b.r2.value();
    if !l.is_positive() {
        return false;
    }
    l.square() > &(&Scalar::from_int(4) * a.r2.value()) * b.r2.value()
}

/// Exact test: the closed ball lies inside the open ball `U_eps(p)`.
fn ball_inside(ball: &CircleProbe, p: &Point, epsilon2: &Scalar) -> bool {
    let d2 = distance2(&ball.center, p);
    let m = &(epsilon2 - &d2) - ball.r2.value();
    if !m.is_positive() {
        return false;
    }
    m.square() > &(&Scalar::from_int(4) * &d2) * ball.r2.value()
}

const MAX_SHRINK_ATTEMPTS: usize = 512;

/// A pierced open neighborhood of `p` inside `U_eps(p)` for a fan.
///
/// Away from the vertex this is a single pierced ball that avoids the
/// vertex. At the vertex, a ball `U_s(v)` with `4 s^2 < eps^2` is combined
/// with one pierced ball per transversal boundary crossing, shrunk (factor
/// 1/4 on squared radii) until the balls are pairwise disjoint and all
/// circles are in general position.
pub fn fan_pierced_basis(
    fan: &Fan,
    p: &Point,
    epsilon2: &SquaredRadius,
) -> Result<(OpenRegion, PiercingCertificate), PierceError> {
    let target: ProbeTarget<'_> = fan.into();
    let vertex = fan.vertex();
    if p != vertex {
        let on_leg = fan.legs().iter().any(|leg| {
            leg.vertices()
                .windows(2)
                .any(|w| point_on_segment(p, &w[0], &w[1]))
        });
        if !on_leg {
            return Err(PierceError::PointNotOnFan);
        }
        // shrink so the closed ball avoids the vertex
        let d2v = distance2(p, vertex);
        let limit = epsilon2.value().clone().min(&d2v / &Scalar::from_int(4));
        let limit = SquaredRadius::new(limit).expect("p != vertex");
        let (r2, cert) = pierced_ball_target(target, p, &limit);
        let region = OpenRegion::ball(p.clone(), r2);
        return Ok((region, cert));
    }

    // vertex case: inner ball plus one pierced ball per boundary crossing
    let quarter = epsilon2.value() / &Scalar::from_int(4);
    let crits = target_critical_radii(target, vertex);
    let s2 = SquaredRadius::new(widest_gap_midpoint(
        crits.into_iter().map(SquaredRadius::into_value),
        &quarter,
    ))
    .expect("positive gap midpoint");
    let inner = CircleProbe {
        center: vertex.clone(),
        r2: s2,
    };
    let crossings = classify_target(target, &inner);
    debug_assert!(crossings.iter().all(|e| e.kind == EventKind::Transversal));

    // presize by the crossing count: points on the inner circle are about
    // a circumference fraction apart, so caps scaling with 1/m^2 keep most
    // neighbouring balls disjoint before any shrinking
    let mut cap = epsilon2.value() / &Scalar::from_int(16);
    let m = crossings.len().max(1) as i64;
    let spacing_cap = &(&(inner.r2.value() * &Scalar::from_int(4)) / &Scalar::from_int(m * m))
        * &Scalar::one();
    if spacing_cap < cap {
        cap = spacing_cap;
    }
    let mut balls: Vec<CircleProbe> = Vec::new();
    for e in &crossings {
        balls.push(boundary_ball(target, e, &cap)?);
    }

    // shrink later balls until the boundary balls are pairwise disjoint and
    // no two circles of the region share a fence point
    let mut attempts = 0usize;
    'restore: loop {
        for i in 0..balls.len() {
            for j in (i + 1)..balls.len() {
                if !closures_disjoint(&balls[i], &balls[j]) {
                    if attempts >= MAX_SHRINK_ATTEMPTS {
                        return Err(PierceError::GeneralPositionExhausted { attempts });
                    }
                    attempts += 1;
                    // shrink the larger ball (factor 1/4 on squared radii)
                    let k = if balls[i].r2 >= balls[j].r2 { i } else { j };
                    let smaller = SquaredRadius::new(balls[k].r2.value() / &Scalar::from_int(4))
                        .expect("positive");
                    balls[k] = boundary_ball(target, &crossings[k], &smaller.into_value())?;
                    continue 'restore;
                }
            }
        }
        let mut all = vec![inner.clone()];
        all.extend(balls.iter().cloned());
        let region = OpenRegion::new(all);
        match verify_pierced_target(target, &region) {
            Ok(PiercingOutcome::Pierced(cert)) => {
                for b in &balls {
                    debug_assert!(ball_inside(b, vertex, epsilon2.value()));
                }
                return Ok((region, cert));
            }
            Ok(PiercingOutcome::NotPierced(f)) => {
                unreachable!("non-critical circles produced a tangency: {f:?}")
            }
            Err(PierceError::GeneralPositionViolated(_)) => {
                if attempts >= MAX_SHRINK_ATTEMPTS {
                    return Err(PierceError::GeneralPositionExhausted { attempts });
                }
                attempts += 1;
                // shrink the last boundary ball and retry
                let last = balls.len() - 1;
                let smaller = SquaredRadius::new(balls[last].r2.value() / &Scalar::from_int(4))
                    .expect("positive");
                balls[last] = boundary_ball(target, &crossings[last], &smaller.into_value())?;
            }
            Err(other) => return Err(other),
        }
    }
}

/// Pierced ball around one transversal boundary crossing: center at a
/// rational point of the leg near the crossing, radius from the widest
/// critical gap, grown-precision until the crossing is strictly inside.
fn boundary_ball(
    target: ProbeTarget<'_>,
    crossing: &CrossingEvent,
    cap: &Scalar,
) -> Result<CircleProbe, PierceError> {
    let (ComponentRef::Arc(arc_idx), Some(pos)) = (crossing.component, &crossing.pos) else {
        unreachable!("fan boundaries cross legs");
    };
    let vs = target.arcs[arc_idx].vertices();
    let (a, b) = (&vs[pos.seg], &vs[pos.seg + 1]);
    let mut width = Scalar::ratio(1, 16);
    for _ in 0..MAX_SHRINK_ATTEMPTS {
        let (lo, hi) = pos.t.refined_bracket(&width);
        let center = point_at(a, b, &Scalar::midpoint(&lo, &hi));
        let r2 = pierced_radius_target(target, &center, cap);
        // the crossing point must be strictly inside the ball
        let profile = radial_profile(a, b, &center).expect("valid segment");
        if profile.side_sign(r2.value(), &pos.t) == Sign::Neg {
            return Ok(CircleProbe { center, r2 });
        }
        width = &width / &Scalar::from_int(16);
    }
    Err(PierceError::GeneralPositionExhausted {
        attempts: MAX_SHRINK_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate, validate_fence, Family, ModelPayload};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn v_bump() -> Fence {
        match generate(&Family::VBump).unwrap() {
            ModelPayload::Fence(f) => f,
            _ => unreachable!(),
        }
    }

    fn ball(x: i64, y: i64, n: i64, d: i64) -> OpenRegion {
        OpenRegion::ball(pt(x, y), SquaredRadius::ratio(n, d))
    }

    #[test]
    fn verify_transversal_ball() {
        let out = verify_pierced(&v_bump(), &ball(0, 0, 1, 2)).unwrap();
        let PiercingOutcome::Pierced(cert) = out else {
            panic!("expected pierced")
        };
        assert_eq!(cert.boundary.len(), 4);
        assert!(cert
            .boundary
            .iter()
            .all(|b| b.verdict == Verdict::TransversalCrossing));
    }

    #[test]
    fn verify_tangency_fails_with_witness() {
        let out = verify_pierced(&v_bump(), &ball(0, 0, 1, 1)).unwrap();
        let PiercingOutcome::NotPierced(f) = out else {
            panic!("expected failure")
        };
        assert_eq!(f.side, StaysOn::Inside);
        assert_eq!(f.event.pos, Some(ArcPos::new(1, Param::zero())));
    }

    #[test]
    fn verify_endpoint_touches_are_vacuous() {
        let out = verify_pierced(&v_bump(), &ball(0, 0, 2, 1)).unwrap();
        let PiercingOutcome::Pierced(cert) = out else {
            panic!("expected pierced")
        };
        assert_eq!(cert.boundary.len(), 2);
        assert!(cert
            .boundary
            .iter()
            .all(|b| b.verdict == Verdict::VacuousEndpoint));
    }

    #[test]
    fn verify_outward_tangency_fails_outside() {
        let out = verify_pierced(&v_bump(), &ball(0, 0, 1, 5)).unwrap();
        let PiercingOutcome::NotPierced(f) = out else {
            panic!("expected failure")
        };
        assert_eq!(f.side, StaysOn::Outside);
    }

    #[test]
    fn pierced_ball_gap_arithmetic() {
        let (r2, cert) = pierced_ball(&v_bump(), &pt(0, 0), &SquaredRadius::ratio(81, 100));
        assert_eq!(r2.value(), &Scalar::ratio(101, 200));
        assert_eq!(cert.boundary.len(), 4);

        let seg = validate_fence(vec![vec![pt(1, 0), pt(2, 0)]], vec![]).unwrap();
        let (r2, cert) = pierced_ball(&seg, &pt(0, 0), &SquaredRadius::ratio(9, 4));
        assert_eq!(r2.value(), &Scalar::ratio(13, 8));
        assert_eq!(cert.boundary.len(), 1);

        let dot = validate_fence(vec![], vec![pt(2, 0)]).unwrap();
        let (r2, cert) = pierced_ball(&dot, &pt(2, 0), &SquaredRadius::ratio(1, 1));
        assert_eq!(r2.value(), &Scalar::ratio(1, 2));
        assert!(cert.boundary.is_empty());
    }

    #[test]
    fn shared_circle_point_is_general_position_violation() {
        // two circles both passing through the apex (0,1)
        let region = OpenRegion::new(vec![
            CircleProbe {
                center: pt(0, 0),
                r2: SquaredRadius::ratio(1, 1),
            },
            CircleProbe {
                center: pt(0, 2),
                r2: SquaredRadius::ratio(1, 1),
            },
        ]);
        assert!(matches!(
            verify_pierced(&v_bump(), &region),
            Err(PierceError::GeneralPositionViolated(_))
        ));
    }

    #[test]
    fn fan_basis_at_star_vertex() {
        let ModelPayload::Fan(fan) = generate(&Family::StarFan { n: 4 }).unwrap() else {
            panic!()
        };
        let (region, cert) =
            fan_pierced_basis(&fan, &pt(0, 0), &SquaredRadius::ratio(1, 4)).unwrap();
        // inner ball plus one ball per leg crossing
        assert_eq!(region.balls().len(), 5);
        assert!(cert
            .boundary
            .iter()
            .all(|b| b.verdict == Verdict::TransversalCrossing));
    }

    #[test]
    fn fan_basis_at_elbow_vertex() {
        let fan = Fan::new(
            pt(0, 0),
            vec![vec![
                pt(0, 0),
                Point::from_ratios(1, 2, 0, 1),
                Point::from_ratios(1, 2, 1, 1),
            ]],
        )
        .unwrap();
        let (region, cert) =
            fan_pierced_basis(&fan, &pt(0, 0), &SquaredRadius::ratio(1, 1)).unwrap();
        assert_eq!(region.balls().len(), 2);
        assert!(cert
            .boundary
            .iter()
            .all(|b| b.verdict == Verdict::TransversalCrossing));
        // the inner radius avoided the critical elbow distance 1/4
        assert!(region
            .balls()
            .iter()
            .all(|b| b.r2.value() != &Scalar::ratio(1, 4)));
    }

    #[test]
    fn fan_basis_on_leg_point() {
        let ModelPayload::Fan(fan) = generate(&Family::StarFan { n: 3 }).unwrap() else {
            panic!()
        };
        let p = Point::from_ratios(1, 2, 0, 1);
        let (region, cert) =
            fan_pierced_basis(&fan, &p, &SquaredRadius::ratio(1, 100)).unwrap();
        assert_eq!(region.balls().len(), 1);
        assert_eq!(cert.boundary.len(), 2);
        // the ball does not contain the vertex
        let b = &region.balls()[0];
        assert!(&distance2(&b.center, &pt(0, 0)) > b.r2.value());
        assert!(matches!(
            fan_pierced_basis(&fan, &pt(5, 5), &SquaredRadius::ratio(1, 1)),
            Err(PierceError::PointNotOnFan)
        ));
    }
}

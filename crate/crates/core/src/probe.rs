//! Circle probing of fences: crossing classification, bend detection and
//! enumeration, and exact bend spectra.
//!
//! A circle meets a polygonal arc in finitely many points. Each connected
//! component of the intersection is classified by the side of the circle the
//! arc occupies on either flank: opposite sides give a transversal crossing,
//! equal sides a tangency, and a missing flank an endpoint touch. Tangencies
//! are exactly the local witnesses of bends: a one-sided touch at `S_r`
//! yields a sub-arc inside a thin annulus whose endpoints both lie on a
//! nearby circle.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{rational_between, Param};
use crate::geometry::{
    circle_segment_events_in, critical_radii, distance2, radial_profile, Point,
    SegComponent, SideSign, SquaredRadius,
};
use crate::model::{Fan, Fence, PolyArc};
use crate::scalar::{Scalar, Sign};

/// The circle of squared radius `r2` about `center`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleProbe {
    pub center: Point,
    pub r2: SquaredRadius,
}

/// Closed annulus probe: bends terminate on the circle of squared radius
/// `q2` and touch the circle of squared radius `r2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusProbe {
    pub center: Point,
    pub q2: SquaredRadius,
    pub r2: SquaredRadius,
}

impl AnnulusProbe {
    pub fn new(center: Point, q2: SquaredRadius, r2: SquaredRadius) -> Result<Self, ProbeError> {
        if q2 == r2 {
            return Err(ProbeError::DegenerateAnnulus);
        }
        Ok(AnnulusProbe { center, q2, r2 })
    }

    pub fn orientation(&self) -> BendOrientation {
        if self.r2 > self.q2 {
            BendOrientation::TouchesOuter
        } else {
            BendOrientation::TouchesInner
        }
    }
}

/// Which component of a fence an event lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentRef {
    Arc(usize),
    Point(usize),
}

/// Position along an arc: segment index plus exact parameter. Normalized so
/// that interior vertices are `(seg, 0)` of the following segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArcPos {
    pub seg: usize,
    pub t: Param,
}

impl ArcPos {
    pub fn new(seg: usize, t: Param) -> ArcPos {
        ArcPos { seg, t }
    }

    /// Index of the polyline vertex this position sits on, if any.
    pub fn vertex_index(&self, arc: &PolyArc) -> Option<usize> {
        if self.t == Param::zero() {
            Some(self.seg)
        } else if self.t == Param::one() && self.seg == arc.segment_count() - 1 {
            Some(self.seg + 1)
        } else {
            None
        }
    }
}

impl PartialOrd for ArcPos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ArcPos {
    fn cmp(&self, other: &Self) -> Ordering {
        self.seg.cmp(&other.seg).then_with(|| self.t.cmp(&other.t))
    }
}

/// Classification of one connected component of `X` meets circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Transversal,
    TangentInside,
    TangentOutside,
    EndpointTouch,
    Overlap,
}

/// One connected component of the intersection of a fence with a circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingEvent {
    pub component: ComponentRef,
    /// Position on the arc; `None` for isolated-point components.
    pub pos: Option<ArcPos>,
    pub kind: EventKind,
    pub before: SideSign,
    pub after: SideSign,
}

/// Probe-level failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("circle overlaps a fence component over a whole sub-arc")]
    OverlapAtRadius,
    #[error("annulus radii must differ")]
    DegenerateAnnulus,
    #[error("theta lies on the bend")]
    ThetaOnBend,
    #[error("no blocked-direction-free radial ray exists")]
    NoRadialRay,
    #[error("cut order was built on a different circle")]
    WrongCircle,
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Borrowed view of the segments and points a probe runs against. Fans probe
/// their legs as arcs; `fan_vertex` marks the shared endpoint.
#[derive(Clone, Copy)]
pub struct ProbeTarget<'a> {
    pub(crate) arcs: &'a [PolyArc],
    pub(crate) points: &'a [Point],
    pub(crate) fan_vertex: Option<&'a Point>,
}

impl<'a> ProbeTarget<'a> {
    pub fn arcs(&self) -> &'a [PolyArc] {
        self.arcs
    }

    pub fn points(&self) -> &'a [Point] {
        self.points
    }
}

impl<'a> From<&'a Fence> for ProbeTarget<'a> {
    fn from(f: &'a Fence) -> Self {
        ProbeTarget {
            arcs: f.arcs(),
            points: f.points(),
            fan_vertex: None,
        }
    }
}

impl<'a> From<&'a Fan> for ProbeTarget<'a> {
    fn from(f: &'a Fan) -> Self {
        ProbeTarget {
            arcs: f.legs(),
            points: &[],
            fan_vertex: Some(f.vertex()),
        }
    }
}

fn classify_sides(before: SideSign, after: SideSign) -> EventKind {
    use SideSign::*;
    match (before, after) {
        (Inside, Outside) | (Outside, Inside) => EventKind::Transversal,
        (Inside, Inside) => EventKind::TangentInside,
        (Outside, Outside) => EventKind::TangentOutside,
        (Boundary, _) | (_, Boundary) => EventKind::EndpointTouch,
    }
}

/// Events of one arc against one circle, vertex-merged and in arc order.
pub(crate) fn arc_events(arc: &PolyArc, center: &Point, r2: &SquaredRadius) -> Vec<CrossingEvent> {
    let mut raw: Vec<(usize, crate::geometry::SegEvent)> = Vec::new();
    let mut overlaps: Vec<ArcPos> = Vec::new();
    for seg in arc.segments() {
        let profile = radial_profile(seg.start, seg.end, center).expect("valid arc segment");
        for comp in circle_segment_events_in(&profile, r2, &seg.lo, &seg.hi) {
            match comp {
                SegComponent::Crossing(e) => raw.push((seg.index, e)),
                SegComponent::Overlap { t0, .. } => overlaps.push(ArcPos::new(seg.index, t0)),
            }
        }
    }
    let last_seg = arc.segment_count() - 1;
    let mut events = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let (seg, e) = &raw[i];
        // a crossing exactly on an interior vertex is reported by both
        // incident segments; merge the two half-events
        if *seg < last_seg && e.t == Param::one() {
            let (nseg, ne) = &raw[i + 1];
            debug_assert!(*nseg == seg + 1 && ne.t == Param::zero());
            let before = e.before;
            let after = ne.after;
            events.push((
                ArcPos::new(seg + 1, Param::zero()),
                before,
                after,
            ));
            i += 2;
            continue;
        }
        events.push((ArcPos::new(*seg, e.t.clone()), e.before, e.after));
        i += 1;
    }
    let mut out: Vec<CrossingEvent> = events
        .into_iter()
        .map(|(pos, before, after)| CrossingEvent {
            component: ComponentRef::Arc(usize::MAX), // fixed by caller
            pos: Some(pos),
            kind: classify_sides(before, after),
            before,
            after,
        })
        .collect();
    for pos in overlaps {
        out.push(CrossingEvent {
            component: ComponentRef::Arc(usize::MAX),
            pos: Some(pos),
            kind: EventKind::Overlap,
            before: SideSign::Boundary,
            after: SideSign::Boundary,
        });
    }
    out
}

/// Events of any probe target (fence or fan legs) against a circle.
pub fn classify_target(target: ProbeTarget<'_>, probe: &CircleProbe) -> Vec<CrossingEvent> {
    let mut out = Vec::new();
    for (idx, arc) in target.arcs.iter().enumerate() {
        for mut e in arc_events(arc, &probe.center, &probe.r2) {
            e.component = ComponentRef::Arc(idx);
            out.push(e);
        }
    }
    for (idx, p) in target.points.iter().enumerate() {
        if &distance2(p, &probe.center) == probe.r2.value() {
            out.push(CrossingEvent {
                component: ComponentRef::Point(idx),
                pos: None,
                kind: EventKind::EndpointTouch,
                before: SideSign::Boundary,
                after: SideSign::Boundary,
            });
        }
    }
    out.sort_by(|a, b| a.component.cmp(&b.component).then_with(|| a.pos.cmp(&b.pos)));
    out
}

/// One classified event per connected component of the fence meets circle.
pub fn classify_circle(fence: &Fence, probe: &CircleProbe) -> Vec<CrossingEvent> {
    classify_target(fence.into(), probe)
}

/// Whether the fence has a bend at this circle; the witness is the tangency
/// event that produces one.
pub fn has_bend(fence: &Fence, probe: &CircleProbe) -> Result<Option<CrossingEvent>, ProbeError> {
    let events = classify_circle(fence, probe);
    if events.iter().any(|e| e.kind == EventKind::Overlap) {
        return Err(ProbeError::OverlapAtRadius);
    }
    Ok(events
        .into_iter()
        .find(|e| matches!(e.kind, EventKind::TangentInside | EventKind::TangentOutside)))
}

/// Bend orientation: which of the two probe circles the sub-arc touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BendOrientation {
    /// `r > q`: endpoints on the inner circle, touch on the outer.
    TouchesOuter,
    /// `r < q`: endpoints on the outer circle, touch on the inner.
    TouchesInner,
}

/// A maximal sub-arc inside the closed annulus that meets the terminating
/// circle exactly at its two endpoints and touches the other circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bend {
    pub arc: usize,
    /// Endpoints in arc-parameter order (use a cut order to orient them).
    pub start: ArcPos,
    pub end: ArcPos,
    pub q2: SquaredRadius,
    pub r2: SquaredRadius,
    pub orientation: BendOrientation,
    /// Positions where the sub-arc meets the touch circle.
    pub touches: Vec<ArcPos>,
}

/// Every bend of the fence in the given annulus.
pub fn find_bends(fence: &Fence, annulus: &AnnulusProbe) -> Result<Vec<Bend>, ProbeError> {
    find_bends_target(fence.into(), annulus)
}

pub(crate) fn find_bends_target(
    target: ProbeTarget<'_>,
    annulus: &AnnulusProbe,
) -> Result<Vec<Bend>, ProbeError> {
    let orientation = annulus.orientation();
    let mut bends = Vec::new();
    for (arc_idx, arc) in target.arcs.iter().enumerate() {
        let q_events = arc_events(arc, &annulus.center, &annulus.q2);
        let r_events = arc_events(arc, &annulus.center, &annulus.r2);
        if q_events.iter().chain(&r_events).any(|e| e.kind == EventKind::Overlap) {
            return Err(ProbeError::OverlapAtRadius);
        }
        let q_pos: Vec<ArcPos> = q_events.into_iter().map(|e| e.pos.unwrap()).collect();
        let r_pos: Vec<ArcPos> = r_events.into_iter().map(|e| e.pos.unwrap()).collect();
        if q_pos.is_empty() {
            continue;
        }
        let segs: Vec<_> = arc.segments().collect();
        let arc_start = ArcPos::new(0, segs[0].lo.clone());
        let arc_end = ArcPos::new(segs.len() - 1, segs[segs.len() - 1].hi.clone());
        // interval boundaries: arc ends plus every point on the terminating circle
        let mut bounds: Vec<(ArcPos, bool)> = Vec::new();
        if q_pos.first() != Some(&arc_start) {
            bounds.push((arc_start, false));
        }
        for p in &q_pos {
            bounds.push((p.clone(), true));
        }
        if q_pos.last() != Some(&arc_end) {
            bounds.push((arc_end, false));
        }
        for w in bounds.windows(2) {
            let (u, u_on_q) = &w[0];
            let (v, v_on_q) = &w[1];
            if !(*u_on_q && *v_on_q) {
                continue;
            }
            if !interval_in_annulus(arc, &segs, &annulus.center, annulus, u, v) {
                continue;
            }
            let touches: Vec<ArcPos> =
                r_pos.iter().filter(|p| **p >= *u && **p <= *v).cloned().collect();
            if touches.is_empty() {
                continue;
            }
            bends.push(Bend {
                arc: arc_idx,
                start: u.clone(),
                end: v.clone(),
                q2: annulus.q2.clone(),
                r2: annulus.r2.clone(),
                orientation,
                touches,
            });
        }
    }
    Ok(bends)
}

/// Rational sample position strictly inside the open arc interval `(u, v)`.
fn sample_between(u: &ArcPos, v: &ArcPos) -> (usize, Scalar) {
    if u.seg == v.seg {
        (u.seg, rational_between(&u.t, &v.t))
    } else {
        (u.seg, rational_between(&u.t, &Param::one()))
    }
}

/// Exact check that `f^2` stays within the closed annulus on `[u, v]` and on
/// the terminating-circle side of it strictly inside.
fn interval_in_annulus(
    arc: &PolyArc,
    segs: &[crate::model::Seg<'_>],
    center: &Point,
    annulus: &AnnulusProbe,
    u: &ArcPos,
    v: &ArcPos,
) -> bool {
    let (lo2, hi2) = if annulus.q2 <= annulus.r2 {
        (annulus.q2.value(), annulus.r2.value())
    } else {
        (annulus.r2.value(), annulus.q2.value())
    };
    // side of the terminating circle: no q-roots inside (u, v), so one
    // rational sample decides
    let (sseg, st) = sample_between(u, v);
    let profile = radial_profile(segs[sseg].start, segs[sseg].end, center).unwrap();
    let inside_ok = match annulus.orientation() {
        BendOrientation::TouchesOuter => {
            profile.side_sign(annulus.q2.value(), &Param::Rat(st)) == Sign::Pos
        }
        BendOrientation::TouchesInner => {
            profile.side_sign(annulus.q2.value(), &Param::Rat(st)) == Sign::Neg
        }
    };
    if !inside_ok {
        return false;
    }
    // annulus containment: extrema of f^2 on [u, v] occur at interior
    // polyline vertices and at interior parabola minima; the interval
    // endpoints themselves sit exactly on the terminating circle
    for seg in &segs[u.seg..=v.seg] {
        let piece_lo = if seg.index == u.seg { u.t.clone() } else { seg.lo.clone() };
        let piece_hi = if seg.index == v.seg { v.t.clone() } else { seg.hi.clone() };
        if piece_lo >= piece_hi {
            continue;
        }
        if seg.index > u.seg {
            // value at the vertex opening this piece
            let d2 = distance2(seg.start, center);
            if &d2 < lo2 || &d2 > hi2 {
                return false;
            }
        }
        let profile = radial_profile(seg.start, seg.end, center).unwrap();
        if let Some((t, value)) = profile.interior_extremum() {
            let t = Param::Rat(t);
            if t > piece_lo && t < piece_hi && (&value < lo2 || &value > hi2) {
                return false;
            }
        }
        let _ = arc;
    }
    true
}

/// The exact set of squared radii at which the fence has a bend, with one
/// tangency witness per radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BendSpectrum {
    pub center: Point,
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub r2: SquaredRadius,
    pub witness: CrossingEvent,
}

/// Bends can only appear at critical radii, so probing those enumerates the
/// whole spectrum.
pub fn bend_spectrum(fence: &Fence, center: &Point) -> BendSpectrum {
    let mut entries = Vec::new();
    for r2 in critical_radii(fence.arcs(), center) {
        let probe = CircleProbe {
            center: center.clone(),
            r2: r2.clone(),
        };
        let witness = has_bend(fence, &probe).expect("polygonal fences never overlap circles");
        if let Some(witness) = witness {
            entries.push(SpectrumEntry { r2, witness });
        }
    }
    BendSpectrum {
        center: center.clone(),
        entries,
    }
}

/// Critical radii of the whole fence: arc criticals plus the distances to
/// isolated points (an isolated point on a circle is an endpoint touch, not
/// a transversal crossing).
pub fn fence_critical_radii(fence: &Fence, center: &Point) -> BTreeSet<SquaredRadius> {
    target_critical_radii(fence.into(), center)
}

pub(crate) fn target_critical_radii(
    target: ProbeTarget<'_>,
    center: &Point,
) -> BTreeSet<SquaredRadius> {
    let mut out = critical_radii(target.arcs, center);
    for p in target.points {
        let d2 = distance2(p, center);
        if d2.is_positive() {
            out.insert(SquaredRadius::new(d2).unwrap());
        }
    }
    out
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

    fn probe(r2n: i64, r2d: i64) -> CircleProbe {
        CircleProbe {
            center: pt(0, 0),
            r2: SquaredRadius::ratio(r2n, r2d),
        }
    }

    #[test]
    fn classify_v_bump_unit_circle() {
        let ev = classify_circle(&v_bump(), &probe(1, 1));
        assert_eq!(ev.len(), 3);
        assert_eq!(ev[0].kind, EventKind::Transversal);
        assert_eq!(ev[0].pos, Some(ArcPos::new(0, Param::rat(1, 5))));
        assert_eq!(ev[1].kind, EventKind::TangentInside);
        assert_eq!(ev[1].pos, Some(ArcPos::new(1, Param::zero())));
        assert_eq!(ev[2].kind, EventKind::Transversal);
        assert_eq!(ev[2].pos, Some(ArcPos::new(1, Param::rat(4, 5))));
    }

    #[test]
    fn classify_v_bump_inner_circle() {
        let ev = classify_circle(&v_bump(), &probe(2, 5));
        assert_eq!(ev.len(), 4);
        assert!(ev.iter().all(|e| e.kind == EventKind::Transversal));
        let ts: Vec<_> = ev.iter().map(|e| e.pos.clone().unwrap()).collect();
        assert_eq!(
            ts,
            vec![
                ArcPos::new(0, Param::rat(2, 5)),
                ArcPos::new(0, Param::rat(4, 5)),
                ArcPos::new(1, Param::rat(1, 5)),
                ArcPos::new(1, Param::rat(3, 5)),
            ]
        );
    }

    #[test]
    fn classify_endpoint_touches() {
        let ev = classify_circle(&v_bump(), &probe(2, 1));
        assert_eq!(ev.len(), 2);
        assert!(ev.iter().all(|e| e.kind == EventKind::EndpointTouch));
    }

    #[test]
    fn arc_inside_circle_has_no_events() {
        let fence = validate_fence(vec![vec![pt(-1, 0), pt(1, 0)]], vec![]).unwrap();
        assert!(classify_circle(&fence, &probe(4, 1)).is_empty());
    }

    #[test]
    fn has_bend_examples() {
        let f = v_bump();
        let w = has_bend(&f, &probe(1, 1)).unwrap().unwrap();
        assert_eq!(w.kind, EventKind::TangentInside);
        assert!(has_bend(&f, &probe(1, 2)).unwrap().is_none());
        assert!(has_bend(&f, &probe(2, 1)).unwrap().is_none());
        // outward tangency at the leg minima
        let w = has_bend(&f, &probe(1, 5)).unwrap().unwrap();
        assert_eq!(w.kind, EventKind::TangentOutside);
    }

    #[test]
    fn find_bends_over_apex() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(2, 5), SquaredRadius::ratio(1, 1))
                .unwrap();
        let bends = find_bends(&f, &annulus).unwrap();
        assert_eq!(bends.len(), 1);
        let b = &bends[0];
        assert_eq!(b.orientation, BendOrientation::TouchesOuter);
        assert_eq!(b.start, ArcPos::new(0, Param::rat(4, 5)));
        assert_eq!(b.end, ArcPos::new(1, Param::rat(1, 5)));
        assert_eq!(b.touches, vec![ArcPos::new(1, Param::zero())]);
    }

    #[test]
    fn find_bends_irrational_endpoints() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(1, 2), SquaredRadius::ratio(1, 1))
                .unwrap();
        let bends = find_bends(&f, &annulus).unwrap();
        assert_eq!(bends.len(), 1);
        let b = &bends[0];
        assert!(b.start.t.as_rational().is_none());
        assert!(b.end.t.as_rational().is_none());
        assert_eq!(b.start.seg, 0);
        assert_eq!(b.end.seg, 1);
        // endpoints are the roots of 5t^2 - 6t + 3/2 nearest the apex
        assert!(b.start.t > Param::rat(4, 5));
        assert!(b.end.t < Param::rat(1, 5));
    }

    #[test]
    fn find_bends_empty_when_crossing_touch_circle() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(2, 5), SquaredRadius::ratio(9, 10))
                .unwrap();
        assert!(find_bends(&f, &annulus).unwrap().is_empty());
    }

    #[test]
    fn find_bends_inner_orientation() {
        let f = v_bump();
        let annulus =
            AnnulusProbe::new(pt(0, 0), SquaredRadius::ratio(2, 5), SquaredRadius::ratio(1, 5))
                .unwrap();
        let bends = find_bends(&f, &annulus).unwrap();
        assert_eq!(bends.len(), 2);
        for b in &bends {
            assert_eq!(b.orientation, BendOrientation::TouchesInner);
            assert_eq!(b.touches.len(), 1);
        }
        assert_eq!(bends[0].start, ArcPos::new(0, Param::rat(2, 5)));
        assert_eq!(bends[0].end, ArcPos::new(0, Param::rat(4, 5)));
        assert_eq!(bends[0].touches[0], ArcPos::new(0, Param::rat(3, 5)));
    }

    #[test]
    fn spectrum_examples() {
        let s = bend_spectrum(&v_bump(), &pt(0, 0));
        let radii: Vec<&Scalar> = s.entries.iter().map(|e| e.r2.value()).collect();
        assert_eq!(radii, vec![&Scalar::ratio(1, 5), &Scalar::from_int(1)]);
        assert_eq!(s.entries[0].witness.kind, EventKind::TangentOutside);
        assert_eq!(s.entries[1].witness.kind, EventKind::TangentInside);

        let seg = validate_fence(vec![vec![pt(1, 0), pt(2, 0)]], vec![]).unwrap();
        assert!(bend_spectrum(&seg, &pt(0, 0)).entries.is_empty());

        let ModelPayload::Fence(nested) = generate(&Family::NestedBumps { k: 2 }).unwrap() else {
            panic!()
        };
        let s = bend_spectrum(&nested, &pt(0, 0));
        let radii: Vec<Scalar> = s.entries.iter().map(|e| e.r2.value().clone()).collect();
        assert_eq!(
            radii,
            vec![
                Scalar::ratio(9, 80),
                Scalar::ratio(1, 5),
                Scalar::ratio(9, 16),
                Scalar::from_int(1),
            ]
        );
    }

    #[test]
    fn spectrum_size_is_bounded_by_features() {
        let f = v_bump();
        let s = bend_spectrum(&f, &pt(0, 0));
        let vertices = 3;
        let segments = 2;
        assert!(s.entries.len() <= vertices + segments);
    }

    #[test]
    fn trimmed_arc_cut_is_endpoint() {
        use crate::model::{fan_slice, Fan};
        let v = pt(0, 0);
        let fan = Fan::new(
            v,
            vec![vec![
                pt(0, 0),
                Point::from_ratios(1, 2, 0, 1),
                Point::from_ratios(1, 2, 1, 1),
            ]],
        )
        .unwrap();
        let sliced = fan_slice(&fan, &SquaredRadius::ratio(1, 8)).unwrap();
        // probing the sliced fence at the cut radius sees endpoint touches
        let ev = classify_circle(&sliced, &probe(1, 8));
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::EndpointTouch);
    }
}

//! Polygonal fences and fans: validation, slicing and example families.
//!
//! A fence is a finite disjoint union of simple polylines and isolated
//! points; a fan is a finite union of simple polylines ("legs") meeting
//! pairwise exactly at a common vertex. Validation is exact; every reported
//! violation carries a witness.
//!
//! Slicing a fan along a circle generally cuts legs at irrational points.
//! Those cuts are carried as root-token trims attached to the first/last
//! segment of the clipped arc, so downstream probing stays exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Param;
use crate::geometry::{
    circle_segment_events, critical_radii, distance2, point_at, point_on_segment, radial_profile,
    segment_intersection, Point, SegComponent, SegIntersection, SquaredRadius,
};
use crate::scalar::Scalar;

/// One component of a fence or one leg of a fan: a simple open polyline.
///
/// `start_trim`/`end_trim`, when present, restrict the first/last segment to
/// a sub-range; the vertex on the far side of a trim is kept in `vertices`
/// but is not part of the arc.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyArc {
    vertices: Vec<Point>,
    start_trim: Option<Param>,
    end_trim: Option<Param>,
}

/// Borrowed view of one active segment of an arc with its parameter range.
pub struct Seg<'a> {
    pub index: usize,
    pub start: &'a Point,
    pub end: &'a Point,
    pub lo: Param,
    pub hi: Param,
}

impl fmt::Debug for PolyArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyArc{:?}", self.vertices)?;
        if let Some(t) = &self.start_trim {
            write!(f, " from {:?}", t)?;
        }
        if let Some(t) = &self.end_trim {
            write!(f, " to {:?}", t)?;
        }
        Ok(())
    }
}

impl PolyArc {
    /// Validate and build an untrimmed arc.
    pub fn new(vertices: Vec<Point>) -> Result<PolyArc, Vec<ModelViolation>> {
        let violations = arc_violations(0, &vertices);
        if violations.is_empty() {
            Ok(PolyArc {
                vertices,
                start_trim: None,
                end_trim: None,
            })
        } else {
            Err(violations)
        }
    }

    pub(crate) fn trimmed_unchecked(
        vertices: Vec<Point>,
        start_trim: Option<Param>,
        end_trim: Option<Param>,
    ) -> PolyArc {
        debug_assert!(vertices.len() >= 2);
        PolyArc {
            vertices,
            start_trim,
            end_trim,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start_trim(&self) -> Option<&Param> {
        self.start_trim.as_ref()
    }

    pub fn end_trim(&self) -> Option<&Param> {
        self.end_trim.as_ref()
    }

    pub fn is_trimmed(&self) -> bool {
        self.start_trim.is_some() || self.end_trim.is_some()
    }

    /// Vertices that belong to the arc (vertices cut off by a trim excluded).
    pub fn active_vertices(&self) -> &[Point] {
        let from = usize::from(self.start_trim.is_some());
        let to = self.vertices.len() - usize::from(self.end_trim.is_some());
        &self.vertices[from..to]
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Active segments with their parameter ranges.
    pub fn segments(&self) -> impl Iterator<Item = Seg<'_>> {
        let last = self.segment_count() - 1;
        self.vertices.windows(2).enumerate().map(move |(i, w)| Seg {
            index: i,
            start: &w[0],
            end: &w[1],
            lo: if i == 0 {
                self.start_trim.clone().unwrap_or_else(Param::zero)
            } else {
                Param::zero()
            },
            hi: if i == last {
                self.end_trim.clone().unwrap_or_else(Param::one)
            } else {
                Param::one()
            },
        })
    }

    /// Whether the arc position `(seg, t)` is the start of the arc.
    pub fn is_arc_start(&self, seg: usize, t: &Param) -> bool {
        seg == 0
            && match &self.start_trim {
                Some(trim) => t == trim,
                None => *t == Param::zero(),
            }
    }

    /// Whether the arc position `(seg, t)` is the end of the arc.
    pub fn is_arc_end(&self, seg: usize, t: &Param) -> bool {
        seg == self.segment_count() - 1
            && match &self.end_trim {
                Some(trim) => t == trim,
                None => *t == Param::one(),
            }
    }
}

/// Identifies a component in validation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentId {
    Arc(usize),
    Point(usize),
    Leg(usize),
}

/// A validation defect with its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelViolation {
    TooFewVertices {
        arc: usize,
    },
    RepeatedVertex {
        arc: usize,
        index: usize,
    },
    ClosedArc {
        arc: usize,
    },
    SelfIntersection {
        arc: usize,
        seg_a: usize,
        seg_b: usize,
        witness: Point,
    },
    ComponentContact {
        a: ComponentId,
        b: ComponentId,
        witness: Point,
    },
    EmptyModel,
    LegDoesNotStartAtVertex {
        leg: usize,
    },
    LegReturnsToVertex {
        leg: usize,
        seg: usize,
    },
}

/// Errors raised by model construction and slicing.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid fence: {0:?}")]
    InvalidFence(Vec<ModelViolation>),
    #[error("invalid fan: {0:?}")]
    InvalidFan(Vec<ModelViolation>),
    #[error("slice radius is critical: r2={0}")]
    CriticalRadius(Scalar),
    #[error("slice removed the whole fan")]
    EmptySlice,
    #[error("cut on leg {leg} segment {seg} has irrational coordinates")]
    IrrationalCut { leg: usize, seg: usize },
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

fn witness_point(hit: &SegIntersection) -> Option<Point> {
    match hit {
        SegIntersection::None => None,
        SegIntersection::At(p) => Some(p.clone()),
        SegIntersection::Overlap(p, _) => Some(p.clone()),
    }
}

fn arc_violations(arc_idx: usize, vertices: &[Point]) -> Vec<ModelViolation> {
    let mut out = Vec::new();
    if vertices.len() < 2 {
        out.push(ModelViolation::TooFewVertices { arc: arc_idx });
        return out;
    }
    for (i, w) in vertices.windows(2).enumerate() {
        if w[0] == w[1] {
            out.push(ModelViolation::RepeatedVertex {
                arc: arc_idx,
                index: i + 1,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    if vertices.first() == vertices.last() {
        out.push(ModelViolation::ClosedArc { arc: arc_idx });
    }
    let n = vertices.len() - 1;
    for i in 0..n {
        for j in (i + 1)..n {
            let hit = segment_intersection(
                &vertices[i],
                &vertices[i + 1],
                &vertices[j],
                &vertices[j + 1],
            );
            if j == i + 1 {
                // consecutive segments must share exactly the joint vertex
                match &hit {
                    SegIntersection::At(p) if *p == vertices[j] => {}
                    _ => out.push(ModelViolation::SelfIntersection {
                        arc: arc_idx,
                        seg_a: i,
                        seg_b: j,
                        witness: witness_point(&hit).unwrap_or_else(|| vertices[j].clone()),
                    }),
                }
            } else if let Some(w) = witness_point(&hit) {
                out.push(ModelViolation::SelfIntersection {
                    arc: arc_idx,
                    seg_a: i,
                    seg_b: j,
                    witness: w,
                });
            }
        }
    }
    out
}

fn arc_arc_contact(a: &[Point], b: &[Point]) -> Option<Point> {
    for i in 0..a.len() - 1 {
        for j in 0..b.len() - 1 {
            if let Some(w) =
                witness_point(&segment_intersection(&a[i], &a[i + 1], &b[j], &b[j + 1]))
            {
                return Some(w);
            }
        }
    }
    None
}

fn point_arc_contact(p: &Point, arc: &[Point]) -> bool {
    arc.windows(2).any(|w| point_on_segment(p, &w[0], &w[1]))
}

/// A finite disjoint union of simple polylines and isolated points.
#[derive(Debug, Clone, PartialEq)]
pub struct Fence {
    arcs: Vec<PolyArc>,
    points: Vec<Point>,
}

impl Fence {
    pub fn arcs(&self) -> &[PolyArc] {
        &self.arcs
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Squared diameter of the vertex/point set (equals the squared diameter
    /// of the fence for untrimmed models).
    pub fn diameter2(&self) -> Scalar {
        let mut pts: Vec<&Point> = self.points.iter().collect();
        for arc in &self.arcs {
            pts.extend(arc.vertices().iter());
        }
        let mut best = Scalar::zero();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = distance2(pts[i], pts[j]);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Smallest squared distance between two distinct components
    /// (positive for a valid fence with more than one component).
    pub fn component_gap2(&self) -> Option<Scalar> {
        let mut best: Option<Scalar> = None;
        let mut push = |d: Scalar| {
            best = Some(match best.take() {
                None => d,
                Some(b) => b.min(d),
            });
        };
        for i in 0..self.arcs.len() {
            for j in (i + 1)..self.arcs.len() {
                push(arc_pair_gap2(&self.arcs[i], &self.arcs[j]));
            }
            for p in &self.points {
                push(point_arc_gap2(p, &self.arcs[i]));
            }
        }
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                push(distance2(&self.points[i], &self.points[j]));
            }
        }
        best
    }
}

fn arc_pair_gap2(a: &PolyArc, b: &PolyArc) -> Scalar {
    let av = a.vertices();
    let bv = b.vertices();
    let mut best: Option<Scalar> = None;
    for i in 0..av.len() - 1 {
        for j in 0..bv.len() - 1 {
            let d = crate::geometry::segment_distance2(&av[i], &av[i + 1], &bv[j], &bv[j + 1]);
            best = Some(match best.take() {
                None => d,
                Some(x) => x.min(d),
            });
        }
    }
    best.unwrap()
}

fn point_arc_gap2(p: &Point, arc: &PolyArc) -> Scalar {
    let v = arc.vertices();
    let mut best: Option<Scalar> = None;
    for w in v.windows(2) {
        let d = crate::geometry::point_segment_distance2(p, &w[0], &w[1]);
        best = Some(match best.take() {
            None => d,
            Some(x) => x.min(d),
        });
    }
    best.unwrap()
}

/// Validate candidate component lists into a fence.
pub fn validate_fence(
    raw_arcs: Vec<Vec<Point>>,
    raw_points: Vec<Point>,
) -> Result<Fence, ModelError> {
    let mut violations = Vec::new();
    for (idx, vs) in raw_arcs.iter().enumerate() {
        violations.extend(arc_violations(idx, vs));
    }
    if raw_arcs.is_empty() && raw_points.is_empty() {
        violations.push(ModelViolation::EmptyModel);
    }
    // inter-component disjointness (skip arcs that are already broken)
    let sound: Vec<usize> = (0..raw_arcs.len())
        .filter(|&i| arc_violations(i, &raw_arcs[i]).is_empty())
        .collect();
    for (ai, &i) in sound.iter().enumerate() {
        for &j in &sound[ai + 1..] {
            if let Some(w) = arc_arc_contact(&raw_arcs[i], &raw_arcs[j]) {
                violations.push(ModelViolation::ComponentContact {
                    a: ComponentId::Arc(i),
                    b: ComponentId::Arc(j),
                    witness: w,
                });
            }
        }
        for (pi, p) in raw_points.iter().enumerate() {
            if point_arc_contact(p, &raw_arcs[i]) {
                violations.push(ModelViolation::ComponentContact {
                    a: ComponentId::Arc(i),
                    b: ComponentId::Point(pi),
                    witness: p.clone(),
                });
            }
        }
    }
    for i in 0..raw_points.len() {
        for j in (i + 1)..raw_points.len() {
            if raw_points[i] == raw_points[j] {
                violations.push(ModelViolation::ComponentContact {
                    a: ComponentId::Point(i),
                    b: ComponentId::Point(j),
                    witness: raw_points[i].clone(),
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ModelError::InvalidFence(violations));
    }
    let arcs = raw_arcs
        .into_iter()
        .map(|vs| PolyArc {
            vertices: vs,
            start_trim: None,
            end_trim: None,
        })
        .collect();
    Ok(Fence {
        arcs,
        points: raw_points,
    })
}

/// A union of simple arcs meeting pairwise exactly at a common vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Fan {
    vertex: Point,
    legs: Vec<PolyArc>,
}

impl Fan {
    pub fn new(vertex: Point, raw_legs: Vec<Vec<Point>>) -> Result<Fan, ModelError> {
        let mut violations = Vec::new();
        if raw_legs.is_empty() {
            violations.push(ModelViolation::EmptyModel);
        }
        for (idx, leg) in raw_legs.iter().enumerate() {
            violations.extend(arc_violations(idx, leg));
            if leg.first() != Some(&vertex) {
                violations.push(ModelViolation::LegDoesNotStartAtVertex { leg: idx });
                continue;
            }
            // the leg must not return to the vertex
            for (si, w) in leg.windows(2).enumerate() {
                if si == 0 {
                    // vertex is this segment's start; it may not reappear inside
                    if point_on_segment(&vertex, &w[0], &w[1]) && vertex != w[0] {
                        violations.push(ModelViolation::LegReturnsToVertex { leg: idx, seg: si });
                    }
                } else if point_on_segment(&vertex, &w[0], &w[1]) {
                    violations.push(ModelViolation::LegReturnsToVertex { leg: idx, seg: si });
                }
            }
        }
        for i in 0..raw_legs.len() {
            for j in (i + 1)..raw_legs.len() {
                for (si, a) in raw_legs[i].windows(2).enumerate() {
                    for (sj, b) in raw_legs[j].windows(2).enumerate() {
                        match segment_intersection(&a[0], &a[1], &b[0], &b[1]) {
                            SegIntersection::None => {}
                            SegIntersection::At(p) if p == vertex && si == 0 && sj == 0 => {}
                            hit => {
                                violations.push(ModelViolation::ComponentContact {
                                    a: ComponentId::Leg(i),
                                    b: ComponentId::Leg(j),
                                    witness: witness_point(&hit).unwrap_or_else(|| vertex.clone()),
                                });
                            }
                        }
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(ModelError::InvalidFan(violations));
        }
        let legs = raw_legs
            .into_iter()
            .map(|vs| PolyArc {
                vertices: vs,
                start_trim: None,
                end_trim: None,
            })
            .collect();
        Ok(Fan { vertex, legs })
    }

    pub fn vertex(&self) -> &Point {
        &self.vertex
    }

    pub fn legs(&self) -> &[PolyArc] {
        &self.legs
    }
}

/// Remove the open ball `U_s(vertex)` from a fan; what remains is a fence.
///
/// Cut points with rational coordinates become ordinary vertices; irrational
/// cuts are carried as root-token trims. Use [`fan_slice_rational`] to reject
/// irrational cuts instead.
pub fn fan_slice(fan: &Fan, s2: &SquaredRadius) -> Result<Fence, ModelError> {
    slice_impl(fan, s2, false)
}

/// Like [`fan_slice`], but fails with [`ModelError::IrrationalCut`] when a
/// cut point has irrational coordinates.
pub fn fan_slice_rational(fan: &Fan, s2: &SquaredRadius) -> Result<Fence, ModelError> {
    slice_impl(fan, s2, true)
}

fn slice_impl(fan: &Fan, s2: &SquaredRadius, rational_only: bool) -> Result<Fence, ModelError> {
    if critical_radii(&fan.legs, &fan.vertex).contains(s2) {
        return Err(ModelError::CriticalRadius(s2.value().clone()));
    }
    let mut pieces: Vec<PolyArc> = Vec::new();
    for (leg_idx, leg) in fan.legs.iter().enumerate() {
        // crossing parameters per segment, in arc order
        let mut cuts: Vec<(usize, Param)> = Vec::new();
        for seg in leg.segments() {
            let profile = radial_profile(seg.start, seg.end, &fan.vertex).expect("valid leg");
            for comp in circle_segment_events(&profile, s2) {
                match comp {
                    SegComponent::Crossing(e) => {
                        // non-critical radius: crossings are transversal and
                        // never sit on segment boundaries
                        cuts.push((seg.index, e.t));
                    }
                    SegComponent::Overlap { .. } => unreachable!("segments cannot overlap circles"),
                }
            }
        }
        // walk: the leg starts at the vertex, inside U_s
        let mut inside = true;
        let mut open: Option<(usize, Param)> = None;
        for (seg, t) in cuts {
            if inside {
                open = Some((seg, t));
            } else {
                let (s0, t0) = open.take().expect("piece start");
                pieces.push(make_piece(leg_idx, leg, s0, &t0, Some((seg, &t)), rational_only)?);
            }
            inside = !inside;
        }
        if !inside {
            let (s0, t0) = open.take().expect("piece start");
            pieces.push(make_piece(leg_idx, leg, s0, &t0, None, rational_only)?);
        }
    }
    if pieces.is_empty() {
        return Err(ModelError::EmptySlice);
    }
    Ok(Fence {
        arcs: pieces,
        points: Vec::new(),
    })
}

fn make_piece(
    leg_idx: usize,
    leg: &PolyArc,
    seg0: usize,
    t0: &Param,
    end: Option<(usize, &Param)>,
    rational_only: bool,
) -> Result<PolyArc, ModelError> {
    let verts = leg.vertices();
    let last_seg = leg.segment_count() - 1;
    let (seg1, t1) = match end {
        Some((s, t)) => (s, Some(t)),
        None => (last_seg, None),
    };
    let mut vs: Vec<Point> = Vec::new();
    let mut start_trim = None;
    let mut end_trim = None;

    match t0.as_rational() {
        Some(t) => vs.push(point_at(&verts[seg0], &verts[seg0 + 1], t)),
        None => {
            if rational_only {
                return Err(ModelError::IrrationalCut {
                    leg: leg_idx,
                    seg: seg0,
                });
            }
            vs.push(verts[seg0].clone());
            start_trim = Some(t0.clone());
        }
    }
    vs.extend(verts[seg0 + 1..=seg1].iter().cloned());
    match t1 {
        None => vs.push(verts[last_seg + 1].clone()),
        Some(t) => match t.as_rational() {
            Some(tr) => vs.push(point_at(&verts[seg1], &verts[seg1 + 1], tr)),
            None => {
                if rational_only {
                    return Err(ModelError::IrrationalCut {
                        leg: leg_idx,
                        seg: seg1,
                    });
                }
                vs.push(verts[seg1 + 1].clone());
                end_trim = Some(t.clone());
            }
        },
    }
    Ok(PolyArc::trimmed_unchecked(vs, start_trim, end_trim))
}

/// Metadata carried by a serialized document.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
}

/// A fence or a fan.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelPayload {
    Fence(Fence),
    Fan(Fan),
}

/// A validated model plus metadata; the on-disk JSON unit.
#[derive(Debug, Clone, PartialEq)]
pub struct FenceDocument {
    pub payload: ModelPayload,
    pub metadata: Metadata,
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<Vec<Point>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    legs: Option<Vec<Vec<Point>>>,
}

/// Errors for document I/O.
#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document kind must be \"fence\" or \"fan\", got {0:?}")]
    BadKind(String),
    #[error("document payload failed validation: {0}")]
    Invalid(#[from] ModelError),
    #[error("trimmed arcs cannot be serialized")]
    TrimmedArcs,
}

impl FenceDocument {
    pub fn fence(fence: Fence, name: &str) -> FenceDocument {
        FenceDocument {
            payload: ModelPayload::Fence(fence),
            metadata: Metadata {
                name: name.to_string(),
                description: String::new(),
            },
        }
    }

    pub fn fan(fan: Fan, name: &str) -> FenceDocument {
        FenceDocument {
            payload: ModelPayload::Fan(fan),
            metadata: Metadata {
                name: name.to_string(),
                description: String::new(),
            },
        }
    }

    pub fn to_json(&self) -> Result<String, DocumentError> {
        let raw = match &self.payload {
            ModelPayload::Fence(f) => {
                if f.arcs.iter().any(PolyArc::is_trimmed) {
                    return Err(DocumentError::TrimmedArcs);
                }
                RawDocument {
                    kind: "fence".to_string(),
                    metadata: Some(self.metadata.clone()),
                    arcs: Some(f.arcs.iter().map(|a| a.vertices.clone()).collect()),
                    points: Some(f.points.clone()),
                    vertex: None,
                    legs: None,
                }
            }
            ModelPayload::Fan(f) => RawDocument {
                kind: "fan".to_string(),
                metadata: Some(self.metadata.clone()),
                arcs: None,
                points: None,
                vertex: Some(f.vertex.clone()),
                legs: Some(f.legs.iter().map(|a| a.vertices.clone()).collect()),
            },
        };
        let mut text = serde_json::to_string_pretty(&raw)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<FenceDocument, DocumentError> {
        let raw: RawDocument = serde_json::from_str(text)?;
        let metadata = raw.metadata.unwrap_or_default();
        match raw.kind.as_str() {
            "fence" => {
                let fence =
                    validate_fence(raw.arcs.unwrap_or_default(), raw.points.unwrap_or_default())?;
                Ok(FenceDocument {
                    payload: ModelPayload::Fence(fence),
                    metadata,
                })
            }
            "fan" => {
                let vertex = raw.vertex.ok_or_else(|| {
                    DocumentError::BadKind("fan document missing vertex".to_string())
                })?;
                let fan = Fan::new(vertex, raw.legs.unwrap_or_default())?;
                Ok(FenceDocument {
                    payload: ModelPayload::Fan(fan),
                    metadata,
                })
            }
            other => Err(DocumentError::BadKind(other.to_string())),
        }
    }
}

/// Built-in example families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `n` disjoint unit segments on the x-axis plus one isolated point.
    SegmentRow { n: usize },
    /// The V-shaped arc `[(-1,-1), (0,1), (1,-1)]`.
    VBump,
    /// `k` concentric V bumps with apex heights `(3/4)^(k-j)`.
    NestedBumps { k: usize },
    /// `n` vertical teeth at `x = 1/i` plus a tooth at `x = 0`.
    Comb { n: usize },
    /// Fan with `n` straight unit legs at spread rational directions.
    StarFan { n: usize },
    /// Fan with `n` legs, each with one right-angle elbow.
    ElbowFan { n: usize },
}

/// A generated fence or fan.
pub type GeneratedModel = ModelPayload;

fn scaled_v_bump(lambda: &Scalar) -> Vec<Point> {
    vec![
        Point::new(-lambda.clone(), -lambda.clone()),
        Point::new(Scalar::zero(), lambda.clone()),
        Point::new(lambda.clone(), -lambda.clone()),
    ]
}

/// Fence made of concentric scaled copies of the V bump; `lambdas` must be
/// strictly increasing and positive.
pub fn scaled_v_bumps(lambdas: &[Scalar]) -> Result<Fence, ModelError> {
    if lambdas.is_empty() {
        return Err(ModelError::BadParams("need at least one bump".to_string()));
    }
    for w in lambdas.windows(2) {
        if w[0] >= w[1] {
            return Err(ModelError::BadParams(
                "bump scales must be strictly increasing".to_string(),
            ));
        }
    }
    if !lambdas[0].is_positive() {
        return Err(ModelError::BadParams(
            "bump scales must be positive".to_string(),
        ));
    }
    validate_fence(lambdas.iter().map(scaled_v_bump).collect(), vec![])
}

/// Rational unit direction number `k` of `n` spread over the full circle.
fn star_direction(k: usize, n: usize) -> Point {
    // quadrant + tangent-quarter construction: exact points on the unit circle
    let q = (4 * k) / n;
    let f = Scalar::ratio((4 * k % n) as i64, n as i64); // in [0, 1)
    let denom = Scalar::one() + f.square();
    let x = &(&Scalar::one() - &f.square()) / &denom;
    let y = &(&f + &f) / &denom;
    match q {
        0 => Point::new(x, y),
        1 => Point::new(-y, x),
        2 => Point::new(-x, -y),
        _ => Point::new(y, -x),
    }
}

/// Build a member of a named family.
pub fn generate(family: &Family) -> Result<GeneratedModel, ModelError> {
    match family {
        Family::SegmentRow { n } => {
            if *n == 0 {
                return Err(ModelError::BadParams("segment_row needs n >= 1".to_string()));
            }
            let arcs = (0..*n)
                .map(|i| {
                    vec![
                        Point::from_ints(2 * i as i64, 0),
                        Point::from_ints(2 * i as i64 + 1, 0),
                    ]
                })
                .collect();
            let points = vec![Point::from_ints(2 * *n as i64, 0)];
            Ok(ModelPayload::Fence(validate_fence(arcs, points)?))
        }
        Family::VBump => Ok(ModelPayload::Fence(validate_fence(
            vec![scaled_v_bump(&Scalar::one())],
            vec![],
        )?)),
        Family::NestedBumps { k } => {
            if *k == 0 {
                return Err(ModelError::BadParams("nested_bumps needs k >= 1".to_string()));
            }
            let mut lambdas = Vec::with_capacity(*k);
            let ratio = Scalar::ratio(3, 4);
            let mut cur = Scalar::one();
            for _ in 0..*k {
                lambdas.push(cur.clone());
                cur = &cur * &ratio;
            }
            lambdas.reverse();
            Ok(ModelPayload::Fence(scaled_v_bumps(&lambdas)?))
        }
        Family::Comb { n } => {
            if *n == 0 {
                return Err(ModelError::BadParams("comb needs n >= 1".to_string()));
            }
            let mut arcs: Vec<Vec<Point>> = (1..=*n)
                .map(|i| {
                    vec![
                        Point::new(Scalar::ratio(1, i as i64), Scalar::zero()),
                        Point::new(Scalar::ratio(1, i as i64), Scalar::one()),
                    ]
                })
                .collect();
            arcs.push(vec![Point::from_ints(0, 0), Point::from_ints(0, 1)]);
            Ok(ModelPayload::Fence(validate_fence(arcs, vec![])?))
        }
        Family::StarFan { n } => {
            if *n == 0 {
                return Err(ModelError::BadParams("star_fan needs n >= 1".to_string()));
            }
            let v = Point::from_ints(0, 0);
            let legs = (0..*n)
                .map(|k| vec![v.clone(), star_direction(k, *n)])
                .collect();
            Ok(ModelPayload::Fan(Fan::new(v, legs)?))
        }
        Family::ElbowFan { n } => {
            if *n == 0 {
                return Err(ModelError::BadParams("elbow_fan needs n >= 1".to_string()));
            }
            let v = Point::from_ints(0, 0);
            let hook = Scalar::ratio(1, *n as i64);
            let legs = (0..*n)
                .map(|k| {
                    let d = star_direction(k, *n);
                    let elbow = Point::new(d.x.half(), d.y.half());
                    let tip = Point::new(
                        &elbow.x - &(&d.y * &hook),
                        &elbow.y + &(&d.x * &hook),
                    );
                    vec![v.clone(), elbow, tip]
                })
                .collect();
            Ok(ModelPayload::Fan(Fan::new(v, legs)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn valid_fence_with_point() {
        let f = validate_fence(vec![vec![pt(0, 0), pt(1, 0)]], vec![pt(2, 0)]).unwrap();
        assert_eq!(f.arcs().len(), 1);
        assert_eq!(f.points().len(), 1);
    }

    #[test]
    fn crossing_components_are_rejected() {
        let err = validate_fence(
            vec![
                vec![pt(0, 0), pt(2, 0)],
                vec![pt(1, -1), pt(1, 1)],
            ],
            vec![],
        )
        .unwrap_err();
        match err {
            ModelError::InvalidFence(vs) => {
                assert!(vs.iter().any(|v| matches!(
                    v,
                    ModelViolation::ComponentContact { witness, .. } if *witness == pt(1, 0)
                )));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn collinear_return_is_self_overlap() {
        let err = validate_fence(vec![vec![pt(0, 0), pt(2, 0), pt(1, 0)]], vec![]).unwrap_err();
        match err {
            ModelError::InvalidFence(vs) => {
                assert!(vs
                    .iter()
                    .any(|v| matches!(v, ModelViolation::SelfIntersection { .. })));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn star_fan_axis_directions() {
        let ModelPayload::Fan(fan) = generate(&Family::StarFan { n: 4 }).unwrap() else {
            panic!()
        };
        let tips: Vec<&Point> = fan.legs().iter().map(|l| &l.vertices()[1]).collect();
        assert_eq!(
            tips,
            vec![&pt(1, 0), &pt(0, 1), &pt(-1, 0), &pt(0, -1)]
        );
    }

    #[test]
    fn generated_families_validate() {
        for fam in [
            Family::SegmentRow { n: 3 },
            Family::VBump,
            Family::NestedBumps { k: 4 },
            Family::Comb { n: 6 },
            Family::StarFan { n: 9 },
            Family::ElbowFan { n: 7 },
        ] {
            generate(&fam).unwrap();
        }
        assert!(matches!(
            generate(&Family::Comb { n: 0 }),
            Err(ModelError::BadParams(_))
        ));
    }

    #[test]
    fn slice_elbow_fan_critical_radius() {
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
        // the elbow sits on the circle of squared radius 1/4
        assert!(matches!(
            fan_slice(&fan, &SquaredRadius::ratio(1, 4)),
            Err(ModelError::CriticalRadius(_))
        ));
        // s2 = 1/8 cuts the first segment at an irrational parameter
        let sliced = fan_slice(&fan, &SquaredRadius::ratio(1, 8)).unwrap();
        assert_eq!(sliced.arcs().len(), 1);
        let arc = &sliced.arcs()[0];
        assert!(arc.start_trim().is_some());
        assert!(arc.end_trim().is_none());
        assert!(matches!(
            fan_slice_rational(&fan, &SquaredRadius::ratio(1, 8)),
            Err(ModelError::IrrationalCut { leg: 0, seg: 0 })
        ));
    }

    #[test]
    fn slice_star_fan_rational_cuts() {
        let v = pt(0, 0);
        let fan = Fan::new(
            v.clone(),
            vec![
                vec![v.clone(), pt(1, 0)],
                vec![v.clone(), pt(0, 1)],
                vec![v.clone(), pt(-1, 0)],
            ],
        )
        .unwrap();
        let sliced = fan_slice_rational(&fan, &SquaredRadius::ratio(1, 4)).unwrap();
        assert_eq!(sliced.arcs().len(), 3);
        for arc in sliced.arcs() {
            assert!(!arc.is_trimmed());
            // every vertex at squared distance >= 1/4 from the origin
            for p in arc.vertices() {
                assert!(distance2(p, &v) >= Scalar::ratio(1, 4));
            }
        }
        assert_eq!(
            sliced.arcs()[0].vertices(),
            &[Point::from_ratios(1, 2, 0, 1), pt(1, 0)]
        );
    }

    #[test]
    fn document_round_trip() {
        let fence = validate_fence(
            vec![vec![pt(0, 0), pt(1, 0), pt(1, 1)]],
            vec![Point::from_ratios(5, 2, -3, 7)],
        )
        .unwrap();
        let doc = FenceDocument::fence(fence, "probe-fixture");
        let text = doc.to_json().unwrap();
        let back = FenceDocument::from_json(&text).unwrap();
        assert_eq!(doc, back);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn empty_slice_is_reported() {
        let v = pt(0, 0);
        let fan = Fan::new(v.clone(), vec![vec![v, pt(1, 0)]]).unwrap();
        assert!(matches!(
            fan_slice(&fan, &SquaredRadius::ratio(9, 1)),
            Err(ModelError::EmptySlice)
        ));
    }
}

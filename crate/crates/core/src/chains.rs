//! Chain covers of fences by open axis-aligned rectangles.
//!
//! A chain is a finite sequence of open boxes whose closures meet exactly
//! when adjacent; a cover is a disjoint union of chains, one per fence
//! component, with links smaller than epsilon and a strictly positive gap
//! between links of different chains.
//!
//! The builder threads boxes along each polyline and then certifies the
//! result with the same exact checks the standalone validator uses,
//! splitting offending pieces until every check passes. Non-adjacent
//! sub-arcs of a simple polyline keep a positive distance, so the loop
//! terminates.

use serde::{Deserialize, Serialize};

use crate::algebra::Param;
use crate::geometry::{point_at, Point, SquaredRadius};
use crate::model::Fence;
use crate::scalar::Scalar;

/// An open axis-aligned rectangle with `min < max` componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Rect {
        assert!(min.x < max.x && min.y < max.y, "degenerate rectangle");
        Rect { min, max }
    }

    pub fn width(&self) -> Scalar {
        &self.max.x - &self.min.x
    }

    pub fn height(&self) -> Scalar {
        &self.max.y - &self.min.y
    }

    pub fn diameter2(&self) -> Scalar {
        self.width().square() + self.height().square()
    }

    pub fn center(&self) -> Point {
        Point::new(
            Scalar::midpoint(&self.min.x, &self.max.x),
            Scalar::midpoint(&self.min.y, &self.max.y),
        )
    }

    pub fn closures_intersect(a: &Rect, b: &Rect) -> bool {
        a.min.x <= b.max.x && b.min.x <= a.max.x && a.min.y <= b.max.y && b.min.y <= a.max.y
    }

    /// Closure of `inner` contained in the open `outer`.
    pub fn strictly_inside(inner: &Rect, outer: &Rect) -> bool {
        outer.min.x < inner.min.x
            && outer.min.y < inner.min.y
            && inner.max.x < outer.max.x
            && inner.max.y < outer.max.y
    }

    pub fn contains_point_open(&self, p: &Point) -> bool {
        self.min.x < p.x && p.x < self.max.x && self.min.y < p.y && p.y < self.max.y
    }

    pub fn inflate(&self, delta: &Scalar) -> Rect {
        Rect::new(
            Point::new(&self.min.x - delta, &self.min.y - delta),
            Point::new(&self.max.x + delta, &self.max.y + delta),
        )
    }

    pub fn of_points(a: &Point, b: &Point) -> Rect {
        let (minx, maxx) = if a.x <= b.x {
            (a.x.clone(), b.x.clone())
        } else {
            (b.x.clone(), a.x.clone())
        };
        let (miny, maxy) = if a.y <= b.y {
            (a.y.clone(), b.y.clone())
        } else {
            (b.y.clone(), a.y.clone())
        };
        // may be degenerate; callers inflate before building a Rect
        Rect {
            min: Point::new(minx, miny),
            max: Point::new(maxx, maxy),
        }
    }

    /// Open parameter interval where the open box meets the segment.
    fn clip_segment(&self, a: &Point, b: &Point) -> Option<(Scalar, Scalar)> {
        let mut lo = Scalar::from_int(-1);
        let mut hi = Scalar::from_int(2);
        for (pa, pb, min, max) in [
            (&a.x, &b.x, &self.min.x, &self.max.x),
            (&a.y, &b.y, &self.min.y, &self.max.y),
        ] {
            let v = pb - pa;
            if v.is_zero() {
                if !(min < pa && pa < max) {
                    return None;
                }
                continue;
            }
            let t0 = &(min - pa) / &v;
            let t1 = &(max - pa) / &v;
            let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            if t0 > lo {
                lo = t0;
            }
            if t1 < hi {
                hi = t1;
            }
        }
        if lo < hi {
            Some((lo, hi))
        } else {
            None
        }
    }
}

/// A finite sequence of open boxes; closures meet exactly when adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub links: Vec<Rect>,
}

/// A disjoint union of chains covering a fence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub chains: Vec<Chain>,
    pub epsilon2: SquaredRadius,
}

/// A violated cover invariant with its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CoverViolation {
    LinkTooLarge {
        chain: usize,
        link: usize,
        diameter2: Scalar,
    },
    MissingAdjacency {
        chain: usize,
        a: usize,
        b: usize,
    },
    UnexpectedAdjacency {
        chain: usize,
        a: usize,
        b: usize,
    },
    CrossChainContact {
        chain_a: usize,
        link_a: usize,
        chain_b: usize,
        link_b: usize,
    },
    UncoveredSegment {
        arc: usize,
        seg: usize,
        lo: Scalar,
        hi: Scalar,
    },
    UncoveredPoint {
        point: usize,
    },
}

/// Check every cover invariant against the fence; empty means valid.
pub fn validate_cover(fence: &Fence, cover: &Cover) -> Vec<CoverViolation> {
    let mut out = Vec::new();
    for (ci, chain) in cover.chains.iter().enumerate() {
        for (li, link) in chain.links.iter().enumerate() {
            let d2 = link.diameter2();
            if &d2 >= cover.epsilon2.value() {
                out.push(CoverViolation::LinkTooLarge {
                    chain: ci,
                    link: li,
                    diameter2: d2,
                });
            }
        }
        for i in 0..chain.links.len() {
            for j in (i + 1)..chain.links.len() {
                let touch = Rect::closures_intersect(&chain.links[i], &chain.links[j]);
                if j == i + 1 && !touch {
                    out.push(CoverViolation::MissingAdjacency { chain: ci, a: i, b: j });
                }
                if j > i + 1 && touch {
                    out.push(CoverViolation::UnexpectedAdjacency { chain: ci, a: i, b: j });
                }
            }
        }
    }
    for ca in 0..cover.chains.len() {
        for cb in (ca + 1)..cover.chains.len() {
            for (la, a) in cover.chains[ca].links.iter().enumerate() {
                for (lb, b) in cover.chains[cb].links.iter().enumerate() {
                    if Rect::closures_intersect(a, b) {
                        out.push(CoverViolation::CrossChainContact {
                            chain_a: ca,
                            link_a: la,
                            chain_b: cb,
                            link_b: lb,
                        });
                    }
                }
            }
        }
    }
    out.extend(coverage_violations(fence, cover));
    out
}

/// Coverage: every fence point must lie in some open link.
fn coverage_violations(fence: &Fence, cover: &Cover) -> Vec<CoverViolation> {
    let mut out = Vec::new();
    let all_links = || cover.chains.iter().flat_map(|c| c.links.iter());
    for (ai, arc) in fence.arcs().iter().enumerate() {
        for seg in arc.segments() {
            let mut spans: Vec<(Scalar, Scalar)> = all_links()
                .filter_map(|l| l.clip_segment(seg.start, seg.end))
                .collect();
            spans.sort_by(|a, b| a.0.cmp(&b.0));
            // sweep the closed range [seg.lo, seg.hi] with open spans
            let mut cur = seg.lo.clone();
            let hi_target = seg.hi.clone();
            loop {
                let mut best: Option<Scalar> = None;
                for (lo, hi) in &spans {
                    if Param::Rat(lo.clone()) < cur && Param::Rat(hi.clone()) > cur {
                        match &best {
                            Some(b) if hi <= b => {}
                            _ => best = Some(hi.clone()),
                        }
                    }
                }
                match best {
                    None => {
                        let (wlo, _) = cur.bracket();
                        let whi = match &hi_target {
                            Param::Rat(x) => x.clone(),
                            t => t.bracket().1,
                        };
                        out.push(CoverViolation::UncoveredSegment {
                            arc: ai,
                            seg: seg.index,
                            lo: wlo,
                            hi: whi,
                        });
                        break;
                    }
                    Some(hi) => {
                        if Param::Rat(hi.clone()) > hi_target {
                            break;
                        }
                        cur = Param::Rat(hi);
                    }
                }
            }
        }
    }
    for (pi, p) in fence.points().iter().enumerate() {
        if !all_links().any(|l| l.contains_point_open(p)) {
            out.push(CoverViolation::UncoveredPoint { point: pi });
        }
    }
    out
}

/// A positive rational at most `sqrt(x)`.
pub(crate) fn sqrt_lower_positive(x: &Scalar) -> Scalar {
    assert!(x.is_positive());
    let mut bits = 16;
    loop {
        let r = x.sqrt_lower(bits);
        if r.is_positive() {
            return r;
        }
        bits += 16;
    }
}

/// One sub-segment of an arc, with its private inflation margin.
#[derive(Debug, Clone)]
#[doc(hidden)]
pub struct Piece {
    pub seg: usize,
    pub lo: Scalar,
    pub hi: Scalar,
    pub delta: Scalar,
}

#[doc(hidden)]
pub fn piece_box(fence: &Fence, arc: usize, piece: &Piece) -> Rect {
    let vs = fence.arcs()[arc].vertices();
    let a = point_at(&vs[piece.seg], &vs[piece.seg + 1], &piece.lo);
    let b = point_at(&vs[piece.seg], &vs[piece.seg + 1], &piece.hi);
    Rect::of_points(&a, &b).inflate(&piece.delta)
}

/// Mutable cover construction state shared by the cover builder and the
/// pattern extractor.
#[derive(Debug, Clone)]
#[doc(hidden)]
pub struct CoverDraft {
    pub arc_pieces: Vec<Vec<Piece>>,
    pub point_deltas: Vec<Scalar>,
}

impl CoverDraft {
    pub fn seed(fence: &Fence, eps2: &Scalar) -> CoverDraft {
        // piece diameter^2 <= eps2 / 16 and margins <= sqrt(eps2) / 16 keep
        // inflated boxes strictly below the diameter bound
        let mut delta = &sqrt_lower_positive(eps2) / &Scalar::from_int(16);
        if let Some(gap2) = fence.component_gap2() {
            let sep = &sqrt_lower_positive(&gap2) / &Scalar::from_int(4);
            if sep < delta {
                delta = sep;
            }
        }
        let sixteen = Scalar::from_int(16);
        let arc_pieces = fence
            .arcs()
            .iter()
            .map(|arc| {
                let mut pieces = Vec::new();
                for seg in arc.segments() {
                    let len2 = crate::geometry::distance2(seg.start, seg.end);
                    let ratio = &(&len2 * &sixteen) / eps2;
                    let n: i64 = {
                        let k = ratio.int_sqrt_upper();
                        use num_traits::ToPrimitive;
                        k.to_i64().unwrap_or(1).max(1)
                    };
                    for i in 0..n {
                        pieces.push(Piece {
                            seg: seg.index,
                            lo: Scalar::ratio(i, n),
                            hi: Scalar::ratio(i + 1, n),
                            delta: delta.clone(),
                        });
                    }
                }
                pieces
            })
            .collect();
        CoverDraft {
            arc_pieces,
            point_deltas: vec![delta; fence.points().len()],
        }
    }

    pub fn chains(&self, fence: &Fence, eps2: &SquaredRadius) -> Cover {
        let mut chains = Vec::new();
        for (ai, pieces) in self.arc_pieces.iter().enumerate() {
            chains.push(Chain {
                links: pieces.iter().map(|p| piece_box(fence, ai, p)).collect(),
            });
        }
        for (pi, delta) in self.point_deltas.iter().enumerate() {
            let p = &fence.points()[pi];
            chains.push(Chain {
                links: vec![Rect::new(
                    Point::new(&p.x - delta, &p.y - delta),
                    Point::new(&p.x + delta, &p.y + delta),
                )],
            });
        }
        Cover {
            chains,
            epsilon2: eps2.clone(),
        }
    }

    /// Split the piece in half (or shrink a point box). Margins shrink
    /// faster than pieces so the margin-to-size ratio decays; separations
    /// near a corner scale with piece length, so conflicts die out.
    pub fn refine(&mut self, chain: usize, link: usize, n_arcs: usize) {
        if chain < n_arcs {
            let pieces = &mut self.arc_pieces[chain];
            let p = pieces[link].clone();
            let mid = Scalar::midpoint(&p.lo, &p.hi);
            let quarter_delta = p.delta.half().half();
            pieces[link] = Piece {
                seg: p.seg,
                lo: p.lo.clone(),
                hi: mid.clone(),
                delta: quarter_delta.clone(),
            };
            pieces.insert(
                link + 1,
                Piece {
                    seg: p.seg,
                    lo: mid,
                    hi: p.hi,
                    delta: quarter_delta,
                },
            );
        } else {
            let d = &mut self.point_deltas[chain - n_arcs];
            *d = d.half().half();
        }
    }
}

const MAX_BUILD_ROUNDS: usize = 64;

/// Cover the fence by one chain per component with links below epsilon.
///
/// Requires an untrimmed fence (slicing output with root-token cuts is not
/// coverable by rational boxes).
pub fn build_cover(fence: &Fence, epsilon2: &SquaredRadius) -> Cover {
    assert!(
        fence.arcs().iter().all(|a| !a.is_trimmed()),
        "chain covers require untrimmed fences"
    );
    let n_arcs = fence.arcs().len();
    let mut draft = CoverDraft::seed(fence, epsilon2.value());
    for _ in 0..MAX_BUILD_ROUNDS {
        let cover = draft.chains(fence, epsilon2);
        let violations = validate_cover(fence, &cover);
        if violations.is_empty() {
            return cover;
        }
        let mut refined = std::collections::BTreeSet::new();
        for v in &violations {
            let targets: Vec<(usize, usize)> = match v {
                CoverViolation::LinkTooLarge { chain, link, .. } => vec![(*chain, *link)],
                CoverViolation::UnexpectedAdjacency { chain, a, b } => {
                    vec![(*chain, *a), (*chain, *b)]
                }
                CoverViolation::CrossChainContact {
                    chain_a,
                    link_a,
                    chain_b,
                    link_b,
                } => vec![(*chain_a, *link_a), (*chain_b, *link_b)],
                CoverViolation::MissingAdjacency { .. }
                | CoverViolation::UncoveredSegment { .. }
                | CoverViolation::UncoveredPoint { .. } => {
                    unreachable!("threaded pieces cover the arc by construction: {v:?}")
                }
            };
            refined.extend(targets);
        }
        // split from the back so earlier indices stay valid
        for (chain, link) in refined.into_iter().rev() {
            draft.refine(chain, link, n_arcs);
        }
    }
    unreachable!("cover construction did not converge in {MAX_BUILD_ROUNDS} rounds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate, validate_fence, Family, ModelPayload};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn segment_and_point_cover() {
        let fence = validate_fence(vec![vec![pt(0, 0), pt(1, 0)]], vec![pt(2, 0)]).unwrap();
        let eps2 = SquaredRadius::ratio(9, 100);
        let cover = build_cover(&fence, &eps2);
        assert_eq!(cover.chains.len(), 2);
        assert_eq!(cover.chains[1].links.len(), 1);
        assert!(validate_cover(&fence, &cover).is_empty());
        assert!(cover.chains[0].links.len() >= 4);
    }

    #[test]
    fn single_point_cover() {
        let fence = validate_fence(vec![], vec![pt(3, -2)]).unwrap();
        let cover = build_cover(&fence, &SquaredRadius::ratio(1, 7));
        assert_eq!(cover.chains.len(), 1);
        assert_eq!(cover.chains[0].links.len(), 1);
        assert!(validate_cover(&fence, &cover).is_empty());
    }

    #[test]
    fn v_bump_cover_follows_arc() {
        let ModelPayload::Fence(fence) = generate(&Family::VBump).unwrap() else {
            panic!()
        };
        let eps2 = SquaredRadius::ratio(1, 4);
        let cover = build_cover(&fence, &eps2);
        assert_eq!(cover.chains.len(), 1);
        assert!(validate_cover(&fence, &cover).is_empty());
        // arc length 2 sqrt(5) ~ 4.47, links of diameter < 1/2
        assert!(cover.chains[0].links.len() as i64 >= 8);
    }

    #[test]
    fn validator_catches_constructed_defects() {
        let fence = validate_fence(vec![vec![pt(0, 0), pt(4, 0)]], vec![]).unwrap();
        // chain with links 0 and 2 overlapping
        let bad = Cover {
            chains: vec![Chain {
                links: vec![
                    Rect::new(Point::from_ratios(-1, 2, -1, 2), Point::from_ratios(2, 1, 1, 2)),
                    Rect::new(Point::from_ratios(3, 2, -1, 2), Point::from_ratios(3, 1, 1, 2)),
                    Rect::new(Point::from_ratios(-1, 4, -1, 4), Point::from_ratios(9, 2, 1, 4)),
                ],
            }],
            epsilon2: SquaredRadius::ratio(100, 1),
        };
        let vs = validate_cover(&fence, &bad);
        assert!(vs
            .iter()
            .any(|v| matches!(v, CoverViolation::UnexpectedAdjacency { a: 0, b: 2, .. })));

        // a cover missing the middle of the segment
        let gappy = Cover {
            chains: vec![Chain {
                links: vec![Rect::new(
                    Point::from_ratios(-1, 2, -1, 2),
                    Point::from_ratios(3, 2, 1, 2),
                )],
            }],
            epsilon2: SquaredRadius::ratio(100, 1),
        };
        let vs = validate_cover(&fence, &gappy);
        assert!(vs
            .iter()
            .any(|v| matches!(v, CoverViolation::UncoveredSegment { .. })));
    }

    #[test]
    fn nested_bumps_chains_stay_disjoint() {
        let ModelPayload::Fence(fence) = generate(&Family::NestedBumps { k: 3 }).unwrap() else {
            panic!()
        };
        let cover = build_cover(&fence, &SquaredRadius::ratio(1, 16));
        assert_eq!(cover.chains.len(), 3);
        assert!(validate_cover(&fence, &cover).is_empty());
    }
}

//! Abstract chain-refinement patterns and their nested-rectangle
//! realizations.
//!
//! A pattern records, level by level, how each chain's links sit inside the
//! previous level's links. Extraction builds geometric covers of a fence at
//! quartering squared diameters and reads the containment relation off the
//! boxes. Realization lays out fresh rectangles that follow a pattern
//! inside a given root box: every chain is either a serpentine over a
//! straight row of parent boxes (each link on its own descending band, so
//! non-adjacent links are separated in y by construction) or a threading of
//! per-parent runs along rectilinear paths between the parent overlaps.

use serde::{Deserialize, Serialize};

use crate::chains::{sqrt_lower_positive, validate_cover, Cover, CoverViolation, Rect};
use crate::geometry::{Point, SquaredRadius};
use crate::model::{validate_fence, Fence, ModelError};
use crate::scalar::Scalar;

/// Reference to a link of the previous level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRef {
    pub chain: usize,
    pub link: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternLink {
    pub parent: Option<LinkRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternChain {
    pub links: Vec<PatternLink>,
}

impl PatternChain {
    /// Parent-link walk of the chain (valid for levels above the root).
    pub fn walk(&self) -> Vec<usize> {
        self.links
            .iter()
            .map(|l| l.parent.expect("non-root link").link)
            .collect()
    }

    pub fn parent_chain(&self) -> Option<usize> {
        self.links.first().and_then(|l| l.parent).map(|r| r.chain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternLevel {
    pub chains: Vec<PatternChain>,
}

/// A refining sequence of abstract chain covers; level 0 is a single root
/// chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPattern {
    pub levels: Vec<PatternLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PatternViolation {
    EmptyPattern,
    RootShape,
    MissingParent { level: usize, chain: usize, link: usize },
    ParentOutOfRange { level: usize, chain: usize, link: usize },
    MixedParentChains { level: usize, chain: usize },
    NonAdjacentStep { level: usize, chain: usize, link: usize },
    NineLinkRule { level: usize, chain: usize },
    EmptyChain { level: usize, chain: usize },
}

impl ChainPattern {
    pub fn new(levels: Vec<PatternLevel>) -> Result<ChainPattern, Vec<PatternViolation>> {
        let p = ChainPattern { levels };
        let v = p.validate();
        if v.is_empty() {
            Ok(p)
        } else {
            Err(v)
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// Structural invariants: single root chain, parent refs form walks on
    /// one parent chain, and no chain of fewer than nine links visits two
    /// non-adjacent parent links.
    pub fn validate(&self) -> Vec<PatternViolation> {
        let mut out = Vec::new();
        if self.levels.is_empty() {
            out.push(PatternViolation::EmptyPattern);
            return out;
        }
        let root = &self.levels[0];
        if root.chains.len() != 1
            || root.chains[0].links.is_empty()
            || root.chains[0].links.iter().any(|l| l.parent.is_some())
        {
            out.push(PatternViolation::RootShape);
        }
        for (k, level) in self.levels.iter().enumerate().skip(1) {
            let parent_level = &self.levels[k - 1];
            for (c, chain) in level.chains.iter().enumerate() {
                if chain.links.is_empty() {
                    out.push(PatternViolation::EmptyChain { level: k, chain: c });
                    continue;
                }
                let mut parent_chain = None;
                let mut prev_link: Option<usize> = None;
                let mut lo = usize::MAX;
                let mut hi = 0usize;
                let mut broken = false;
                for (li, link) in chain.links.iter().enumerate() {
                    let Some(r) = link.parent else {
                        out.push(PatternViolation::MissingParent {
                            level: k,
                            chain: c,
                            link: li,
                        });
                        broken = true;
                        continue;
                    };
                    if r.chain >= parent_level.chains.len()
                        || r.link >= parent_level.chains[r.chain].links.len()
                    {
                        out.push(PatternViolation::ParentOutOfRange {
                            level: k,
                            chain: c,
                            link: li,
                        });
                        broken = true;
                        continue;
                    }
                    match parent_chain {
                        None => parent_chain = Some(r.chain),
                        Some(pc) if pc != r.chain => {
                            out.push(PatternViolation::MixedParentChains { level: k, chain: c });
                            broken = true;
                        }
                        _ => {}
                    }
                    if let Some(p) = prev_link {
                        if r.link.abs_diff(p) > 1 {
                            out.push(PatternViolation::NonAdjacentStep {
                                level: k,
                                chain: c,
                                link: li,
                            });
                        }
                    }
                    prev_link = Some(r.link);
                    lo = lo.min(r.link);
                    hi = hi.max(r.link);
                }
                if !broken && chain.links.len() < 9 && hi.saturating_sub(lo) >= 2 {
                    out.push(PatternViolation::NineLinkRule { level: k, chain: c });
                }
            }
        }
        out
    }
}

/// Errors from pattern extraction and realization.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PatternError {
    #[error("invalid pattern: {0:?}")]
    InvalidPattern(Vec<PatternViolation>),
    #[error("pattern cannot be realized at level {level} chain {chain} link {link}: {reason}")]
    PatternInfeasible {
        level: usize,
        chain: usize,
        link: usize,
        reason: String,
    },
}

const MAX_EXTRACT_ROUNDS: usize = 256;
/// Pass-through runs shorter than this cannot honor the diameter decay when
/// threaded across a parent box.
const MIN_TRANSIT_RUN: usize = 5;

/// Covers at quartering squared diameters, each refining the last; the
/// containment relation becomes the abstract pattern. Chains follow the
/// fence components, so every walk is monotone with single steps.
pub fn extract_pattern(fence: &Fence, depth: usize) -> ChainPattern {
    assert!(depth >= 1, "depth must be at least 1");
    assert!(
        fence.arcs().iter().all(|a| !a.is_trimmed()),
        "patterns require untrimmed fences"
    );
    let n_arcs = fence.arcs().len();
    let n_chains = n_arcs + fence.points().len();

    let mut diam2 = fence.diameter2();
    if diam2.is_zero() {
        diam2 = Scalar::one();
    }

    let root_level = PatternLevel {
        chains: vec![PatternChain {
            links: vec![PatternLink { parent: None }],
        }],
    };
    let mut levels = vec![root_level];
    let mut prev_cover: Option<Cover> = None;

    let four = Scalar::from_int(4);
    let mut eps2 = diam2;
    for level_idx in 1..=depth {
        eps2 = &eps2 / &four;
        let eps2_r = SquaredRadius::new(eps2.clone()).expect("positive scale");
        let mut draft = crate::chains::CoverDraft::seed(fence, &eps2);
        let mut rounds = 0usize;
        let (cover, assignments) = loop {
            rounds += 1;
            assert!(
                rounds <= MAX_EXTRACT_ROUNDS,
                "pattern extraction did not converge at level {level_idx}"
            );
            let cover = draft.chains(fence, &eps2_r);
            let violations = validate_cover(fence, &cover);
            if !violations.is_empty() {
                refine_for_cover_violations(&mut draft, &violations, n_arcs);
                continue;
            }
            match assign_parents(&cover, prev_cover.as_ref(), n_arcs) {
                Ok(assignments) => break (cover, assignments),
                Err(splits) => {
                    for (chain, link) in splits.into_iter().rev() {
                        draft.refine(chain, link, n_arcs);
                    }
                }
            }
        };
        let mut chains = Vec::with_capacity(n_chains);
        for assigned in &assignments {
            chains.push(PatternChain {
                links: assigned
                    .iter()
                    .map(|&(chain, link)| PatternLink {
                        parent: Some(LinkRef { chain, link }),
                    })
                    .collect(),
            });
        }
        levels.push(PatternLevel { chains });
        prev_cover = Some(cover);
    }
    let pattern = ChainPattern { levels };
    debug_assert!(pattern.validate().is_empty());
    pattern
}

fn refine_for_cover_violations(
    draft: &mut crate::chains::CoverDraft,
    violations: &[CoverViolation],
    n_arcs: usize,
) {
    let mut refined = std::collections::BTreeSet::new();
    for v in violations {
        match v {
            CoverViolation::LinkTooLarge { chain, link, .. } => {
                refined.insert((*chain, *link));
            }
            CoverViolation::UnexpectedAdjacency { chain, a, b } => {
                refined.insert((*chain, *a));
                refined.insert((*chain, *b));
            }
            CoverViolation::CrossChainContact {
                chain_a,
                link_a,
                chain_b,
                link_b,
            } => {
                refined.insert((*chain_a, *link_a));
                refined.insert((*chain_b, *link_b));
            }
            other => unreachable!("threaded covers cannot miss the fence: {other:?}"),
        }
    }
    for (chain, link) in refined.into_iter().rev() {
        draft.refine(chain, link, n_arcs);
    }
}

type Assignment = Vec<Vec<(usize, usize)>>;

/// Assign every link of `cover` to a containing link of the parent cover.
/// On failure, returns pieces to split (straddlers, jumps, short transit
/// runs, nine-link violations).
fn assign_parents(
    cover: &Cover,
    parent: Option<&Cover>,
    n_arcs: usize,
) -> Result<Assignment, Vec<(usize, usize)>> {
    let Some(parent) = parent else {
        // first level: everything hangs off the single root link
        return Ok(cover
            .chains
            .iter()
            .map(|c| vec![(0usize, 0usize); c.links.len()])
            .collect());
    };
    let mut out = Vec::with_capacity(cover.chains.len());
    let mut splits = Vec::new();
    for (ci, chain) in cover.chains.iter().enumerate() {
        let parent_links = &parent.chains[ci].links;
        let mut assigned: Vec<(usize, usize)> = Vec::with_capacity(chain.links.len());
        for (li, link) in chain.links.iter().enumerate() {
            let prev = assigned.last().map(|&(_, l)| l);
            let candidate = (0..parent_links.len())
                .filter(|&pi| Rect::strictly_inside(link, &parent_links[pi]))
                .find(|&pi| match prev {
                    None => true,
                    Some(p) => pi == p || pi == p + 1,
                });
            match candidate {
                Some(pi) => assigned.push((ci, pi)),
                None => splits.push((ci, li)),
            }
        }
        if !splits.is_empty() {
            continue;
        }
        // transit runs must be long enough to thread across a parent box
        let runs = run_lengths(&assigned);
        for (ri, &(start, len)) in runs.iter().enumerate() {
            let has_entry = ri > 0;
            let has_exit = ri + 1 < runs.len();
            if has_entry && has_exit && len < MIN_TRANSIT_RUN {
                for li in start..start + len {
                    splits.push((ci, li));
                }
            }
        }
        // nine-link rule
        if assigned.len() < 9 {
            let lo = assigned.iter().map(|&(_, l)| l).min().unwrap();
            let hi = assigned.iter().map(|&(_, l)| l).max().unwrap();
            if hi - lo >= 2 {
                for li in 0..chain.links.len() {
                    splits.push((ci, li));
                }
            }
        }
        out.push(assigned);
    }
    // point chains are singletons; containment failures surface as splits
    let _ = n_arcs;
    if splits.is_empty() {
        Ok(out)
    } else {
        splits.sort();
        splits.dedup();
        Err(splits)
    }
}

fn run_lengths(assigned: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, &(_, link)) in assigned.iter().enumerate() {
        match runs.last_mut() {
            Some((start, len)) if assigned[*start].1 == link => *len += 1,
            _ => runs.push((i, 1)),
        }
    }
    runs
}

/// Boxes for every pattern link, level by level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectRealization {
    pub root: Rect,
    pub levels: Vec<Vec<Vec<Rect>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RealizationViolation {
    ShapeMismatch {
        level: usize,
    },
    NotInsideParent {
        level: usize,
        chain: usize,
        link: usize,
    },
    MissingAdjacency {
        level: usize,
        chain: usize,
        a: usize,
        b: usize,
    },
    UnexpectedAdjacency {
        level: usize,
        chain: usize,
        a: usize,
        b: usize,
    },
    CrossChainContact {
        level: usize,
        chain_a: usize,
        link_a: usize,
        chain_b: usize,
        link_b: usize,
    },
    DiameterDecay {
        level: usize,
        chain: usize,
        link: usize,
    },
}

/// Independent checks: containment in assigned parents, adjacency equal to
/// the pattern, and per-level diameter decay.
pub fn validate_realization(
    pattern: &ChainPattern,
    realization: &RectRealization,
) -> Vec<RealizationViolation> {
    let mut out = Vec::new();
    if realization.levels.len() != pattern.levels.len() {
        out.push(RealizationViolation::ShapeMismatch {
            level: realization.levels.len(),
        });
        return out;
    }
    let root_diam2 = realization.root.diameter2();
    let mut decay = root_diam2.clone();
    for (k, (plevel, rlevel)) in pattern
        .levels
        .iter()
        .zip(realization.levels.iter())
        .enumerate()
    {
        if plevel.chains.len() != rlevel.len()
            || plevel
                .chains
                .iter()
                .zip(rlevel.iter())
                .any(|(pc, rc)| pc.links.len() != rc.len())
        {
            out.push(RealizationViolation::ShapeMismatch { level: k });
            return out;
        }
        for (ci, (pchain, rchain)) in plevel.chains.iter().zip(rlevel.iter()).enumerate() {
            for (li, link) in rchain.iter().enumerate() {
                let parent_box = match pchain.links[li].parent {
                    None => &realization.root,
                    Some(r) => &realization.levels[k - 1][r.chain][r.link],
                };
                if !Rect::strictly_inside(link, parent_box) {
                    out.push(RealizationViolation::NotInsideParent {
                        level: k,
                        chain: ci,
                        link: li,
                    });
                }
                if k > 0 && link.diameter2() > decay {
                    out.push(RealizationViolation::DiameterDecay {
                        level: k,
                        chain: ci,
                        link: li,
                    });
                }
            }
            for i in 0..rchain.len() {
                for j in (i + 1)..rchain.len() {
                    let touch = Rect::closures_intersect(&rchain[i], &rchain[j]);
                    if j == i + 1 && !touch {
                        out.push(RealizationViolation::MissingAdjacency {
                            level: k,
                            chain: ci,
                            a: i,
                            b: j,
                        });
                    }
                    if j > i + 1 && touch {
                        out.push(RealizationViolation::UnexpectedAdjacency {
                            level: k,
                            chain: ci,
                            a: i,
                            b: j,
                        });
                    }
                }
            }
        }
        for ca in 0..rlevel.len() {
            for cb in (ca + 1)..rlevel.len() {
                for (la, a) in rlevel[ca].iter().enumerate() {
                    for (lb, b) in rlevel[cb].iter().enumerate() {
                        if Rect::closures_intersect(a, b) {
                            out.push(RealizationViolation::CrossChainContact {
                                level: k,
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
        decay = &decay / &Scalar::from_int(4);
    }
    out
}

#[derive(Debug, Clone)]
enum Corridor {
    /// Boxes share one y-range and ascend in x.
    Row { y_lo: Scalar, y_hi: Scalar },
    General,
}

#[derive(Debug, Clone)]
struct RealizedChain {
    boxes: Vec<Rect>,
    corridor: Corridor,
}

/// Realize the pattern as nested open rectangles inside `root`.
pub fn realize_pattern(pattern: &ChainPattern, root: &Rect) -> Result<RectRealization, PatternError> {
    let violations = pattern.validate();
    if !violations.is_empty() {
        return Err(PatternError::InvalidPattern(violations));
    }
    let root_diam2 = root.diameter2();
    // per-level cap on box side lengths: 2 cap_k^2 <= diam2 / 4^k
    let cap_base = sqrt_lower_positive(&root_diam2.half());
    let mut caps = vec![Scalar::zero(); pattern.levels.len()];
    let mut c = cap_base;
    for cap in caps.iter_mut() {
        *cap = c.clone();
        c = c.half();
    }

    let mut realized: Vec<Vec<RealizedChain>> = Vec::with_capacity(pattern.levels.len());
    // level 0: straight row inside the root
    let n_root = pattern.levels[0].chains[0].links.len();
    realized.push(vec![row_layout(root, n_root)]);

    for (k, level) in pattern.levels.iter().enumerate().skip(1) {
        let mut level_out: Vec<RealizedChain> = Vec::with_capacity(level.chains.len());
        // children sharing a parent chain split its corridor
        for (ci, chain) in level.chains.iter().enumerate() {
            let pc = chain.parent_chain().expect("validated");
            let siblings: Vec<usize> = level
                .chains
                .iter()
                .enumerate()
                .filter(|(_, other)| other.parent_chain() == Some(pc))
                .map(|(i, _)| i)
                .collect();
            let slot = siblings.iter().position(|&i| i == ci).unwrap();
            let parent = &realized[k - 1][pc];
            let walk = chain.walk();
            let rc = match &parent.corridor {
                Corridor::Row { y_lo, y_hi } => {
                    let band = band_slice(y_lo, y_hi, slot, siblings.len());
                    serpentine(&walk, &parent.boxes, &band, &caps[k]).map_err(|reason| {
                        PatternError::PatternInfeasible {
                            level: k,
                            chain: ci,
                            link: reason.1,
                            reason: reason.0,
                        }
                    })?
                }
                Corridor::General => {
                    if siblings.len() > 1 {
                        return Err(PatternError::PatternInfeasible {
                            level: k,
                            chain: ci,
                            link: 0,
                            reason: "multiple chains in a non-row corridor".to_string(),
                        });
                    }
                    let ascending = walk.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
                    let descending =
                        walk.windows(2).all(|w| w[1] == w[0] || w[1] + 1 == w[0]);
                    if !(ascending || descending) {
                        return Err(PatternError::PatternInfeasible {
                            level: k,
                            chain: ci,
                            link: 0,
                            reason: "folded walk over a non-row corridor".to_string(),
                        });
                    }
                    let oriented: Vec<usize> = if ascending {
                        walk.clone()
                    } else {
                        walk.iter().rev().copied().collect()
                    };
                    let mut rc = thread_runs(&oriented, &parent.boxes, &caps[k]).map_err(
                        |reason| PatternError::PatternInfeasible {
                            level: k,
                            chain: ci,
                            link: reason.1,
                            reason: reason.0,
                        },
                    )?;
                    if !ascending {
                        rc.boxes.reverse();
                    }
                    rc
                }
            };
            level_out.push(rc);
        }
        realized.push(level_out);
    }
    Ok(RectRealization {
        root: root.clone(),
        levels: realized
            .into_iter()
            .map(|chains| chains.into_iter().map(|c| c.boxes).collect())
            .collect(),
    })
}

/// Straight row of `n` boxes with consecutive-only closure contact.
fn row_layout(region: &Rect, n: usize) -> RealizedChain {
    let mx = &region.width() / &Scalar::from_int(8);
    let my = &region.height() / &Scalar::from_int(8);
    let x0 = &region.min.x + &mx;
    let x1 = &region.max.x - &mx;
    let y_lo = &region.min.y + &my;
    let y_hi = &region.max.y - &my;
    let step = &(&x1 - &x0) / &Scalar::from_int(n as i64 + 1);
    let quarter = &step / &Scalar::from_int(4);
    let boxes = (0..n)
        .map(|i| {
            let lo = &x0 + &(&step * &Scalar::from_int(i as i64));
            let hi = &x0 + &(&step * &Scalar::from_int(i as i64 + 2));
            Rect::new(
                Point::new(&lo + &quarter, y_lo.clone()),
                Point::new(&hi - &quarter, y_hi.clone()),
            )
        })
        .collect();
    RealizedChain {
        boxes,
        corridor: Corridor::Row { y_lo, y_hi },
    }
}

/// Sub-band `slot` of `count` inside `[y_lo, y_hi]`, with outer margin and
/// inter-band gaps.
fn band_slice(y_lo: &Scalar, y_hi: &Scalar, slot: usize, count: usize) -> (Scalar, Scalar) {
    let h = y_hi - y_lo;
    let margin = &h / &Scalar::from_int(8);
    let usable = &h - &(&margin + &margin);
    let part = &usable / &Scalar::from_int(count as i64);
    let gap = &part / &Scalar::from_int(8);
    let top = &(y_hi - &margin) - &(&part * &Scalar::from_int(slot as i64));
    (&(&top - &part) + &gap, &top - &gap)
}

/// Overlap rectangle of two parent boxes; must be open.
fn open_overlap(a: &Rect, b: &Rect) -> Option<Rect> {
    let minx = if a.min.x >= b.min.x { a.min.x.clone() } else { b.min.x.clone() };
    let miny = if a.min.y >= b.min.y { a.min.y.clone() } else { b.min.y.clone() };
    let maxx = if a.max.x <= b.max.x { a.max.x.clone() } else { b.max.x.clone() };
    let maxy = if a.max.y <= b.max.y { a.max.y.clone() } else { b.max.y.clone() };
    if minx < maxx && miny < maxy {
        Some(Rect::new(Point::new(minx, miny), Point::new(maxx, maxy)))
    } else {
        None
    }
}

type LayoutErr = (String, usize);

/// Serpentine layout over a row corridor: link `i` lives on descending band
/// `i`, and its x-interval follows the walk between transition columns, so
/// parent containment and exact adjacency hold for arbitrary walks.
fn serpentine(
    walk: &[usize],
    parents: &[Rect],
    band: &(Scalar, Scalar),
    cap: &Scalar,
) -> Result<RealizedChain, LayoutErr> {
    let n = walk.len();
    let (b_lo, b_hi) = band;
    let height = b_hi - b_lo;
    let mut s = &height / &Scalar::from_int(n as i64 + 3);
    let cap_s = &(cap + cap) / &Scalar::from_int(3);
    if s > cap_s {
        s = cap_s;
    }
    let three_quarter_s = &(&s * &Scalar::from_int(3)) / &Scalar::from_int(4);

    // transitions between runs use the column at the overlap's x-center
    let mut columns: Vec<Option<Scalar>> = Vec::new(); // per link: column after it
    for w in walk.windows(2) {
        if w[0] == w[1] {
            columns.push(None);
        } else {
            let (a, b) = (&parents[w[0].min(w[1])], &parents[w[0].max(w[1])]);
            let o = open_overlap(a, b)
                .ok_or_else(|| ("parent links do not overlap openly".to_string(), 0usize))?;
            columns.push(Some(Scalar::midpoint(&o.min.x, &o.max.x)));
        }
    }

    // per-run anchors: entry column, exit column (box center when missing)
    let mut xi: Vec<Scalar> = Vec::with_capacity(n);
    let mut widths: Vec<Scalar> = Vec::with_capacity(n);
    let runs = walk_runs(walk);
    for (ri, run) in runs.iter().enumerate() {
        let (start, len, parent_idx) = *run;
        let parent = &parents[parent_idx];
        let center_x = Scalar::midpoint(&parent.min.x, &parent.max.x);
        let entry = if ri > 0 { columns[start - 1].clone() } else { None };
        let exit = if start + len - 1 < columns.len() {
            columns[start + len - 1].clone()
        } else {
            None
        };
        let (a, b) = match (entry, exit) {
            (Some(a), Some(b)) => (a, b),
            (Some(a), None) => (a.clone(), a),
            (None, Some(b)) => (b.clone(), b),
            (None, None) => (center_x.clone(), center_x.clone()),
        };
        let span = (&b - &a).abs();
        let step = if len > 1 {
            &span / &Scalar::from_int(len as i64 - 1)
        } else {
            Scalar::zero()
        };
        let mut w = &(&step * &Scalar::from_int(3)) / &Scalar::from_int(2);
        let min_w = s.clone();
        if w < min_w {
            w = min_w;
        }
        if &w > cap {
            return Err((
                "run spans too far for the diameter cap; add links".to_string(),
                start,
            ));
        }
        if len == 1 && !span.is_zero() {
            // one box bridging both anchors
            let w1 = &span + &w;
            if &w1 > cap {
                return Err(("single-link transit exceeds the diameter cap".to_string(), start));
            }
            xi.push(Scalar::midpoint(&a, &b));
            widths.push(w1);
        } else {
            for i in 0..len {
                let t = if len > 1 {
                    Scalar::ratio(i as i64, len as i64 - 1)
                } else {
                    Scalar::zero()
                };
                xi.push(&a + &(&(&b - &a) * &t));
                widths.push(w.clone());
            }
        }
    }

    // assemble boxes: per-link descending bands, x around xi
    let mut boxes = Vec::with_capacity(n);
    for i in 0..n {
        let yc = b_hi - &(&s * &Scalar::from_int(i as i64 + 2));
        let half_w = widths[i].half();
        let rect = Rect::new(
            Point::new(&xi[i] - &half_w, &yc - &three_quarter_s),
            Point::new(&xi[i] + &half_w, &yc + &three_quarter_s),
        );
        let parent = &parents[walk[i]];
        if !Rect::strictly_inside(&rect, parent) {
            return Err(("link does not fit inside its parent".to_string(), i));
        }
        boxes.push(rect);
    }
    Ok(RealizedChain {
        boxes,
        corridor: Corridor::General,
    })
}

fn walk_runs(walk: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut runs: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &p) in walk.iter().enumerate() {
        match runs.last_mut() {
            Some((_, len, parent)) if *parent == p => *len += 1,
            _ => runs.push((i, 1, p)),
        }
    }
    runs
}

/// Monotone threading over an arbitrary corridor: each run walks a
/// rectilinear path from the previous overlap's center to the next.
fn thread_runs(
    walk: &[usize],
    parents: &[Rect],
    cap: &Scalar,
) -> Result<RealizedChain, LayoutErr> {
    let runs = walk_runs(walk);
    // contacts between consecutive visited parents
    let mut contacts: Vec<Point> = Vec::new();
    for w in runs.windows(2) {
        let (a, b) = (&parents[w[0].2], &parents[w[1].2]);
        let o = open_overlap(a, b)
            .ok_or_else(|| ("parent links do not overlap openly".to_string(), w[1].0))?;
        contacts.push(o.center());
    }
    // paths and per-run piece lengths first: a run's margin must stay below
    // the neighbouring runs' piece lengths or boxes two apart can touch at
    // the contact
    let mut paths: Vec<Vec<Point>> = Vec::with_capacity(runs.len());
    let mut piece_lens: Vec<Scalar> = Vec::with_capacity(runs.len());
    for (ri, &(start, len, parent_idx)) in runs.iter().enumerate() {
        let parent = &parents[parent_idx];
        let entry = if ri > 0 { Some(contacts[ri - 1].clone()) } else { None };
        let exit = if ri < contacts.len() {
            Some(contacts[ri].clone())
        } else {
            None
        };
        let path = run_path(parent, entry, exit, cap, start)?;
        let total = path
            .windows(2)
            .fold(Scalar::zero(), |acc, w| {
                &acc + &((&w[1].x - &w[0].x).abs() + (&w[1].y - &w[0].y).abs())
            });
        if total.is_zero() {
            return Err(("degenerate run path".to_string(), start));
        }
        piece_lens.push(&total / &Scalar::from_int(len as i64));
        paths.push(path);
    }
    let mut boxes: Vec<Rect> = Vec::new();
    for (ri, &(start, len, parent_idx)) in runs.iter().enumerate() {
        let parent = &parents[parent_idx];
        let mut margin_cap = piece_lens[ri].clone();
        if ri > 0 {
            margin_cap = margin_cap.min(piece_lens[ri - 1].clone());
        }
        if ri + 1 < runs.len() {
            margin_cap = margin_cap.min(piece_lens[ri + 1].clone());
        }
        thread_path(&paths[ri], len, parent, cap, &margin_cap, start, &mut boxes)?;
    }
    Ok(RealizedChain {
        boxes,
        corridor: Corridor::General,
    })
}

/// Rectilinear path for one run inside its parent box.
fn run_path(
    parent: &Rect,
    entry: Option<Point>,
    exit: Option<Point>,
    cap: &Scalar,
    start_link: usize,
) -> Result<Vec<Point>, LayoutErr> {
    let center = parent.center();
    let stub = |from: &Point| -> Vec<Point> {
        // short leg from a contact towards the box center
        let dx = (&center.x - &from.x).abs();
        let dy = (&center.y - &from.y).abs();
        let to = if dx >= dy {
            Point::new(Scalar::midpoint(&from.x, &center.x), from.y.clone())
        } else {
            Point::new(from.x.clone(), Scalar::midpoint(&from.y, &center.y))
        };
        if to == *from {
            // contact already at the center: lean towards a side
            let reach = Scalar::midpoint(&from.x, &parent.max.x);
            vec![from.clone(), Point::new(reach, from.y.clone())]
        } else {
            vec![from.clone(), to]
        }
    };
    match (entry, exit) {
        (Some(e), Some(x)) => {
            if e == x {
                return Err((
                    "coincident junction contacts in the corridor".to_string(),
                    start_link,
                ));
            }
            let elbow = Point::new(x.x.clone(), e.y.clone());
            let mut path = vec![e.clone()];
            if elbow != e && elbow != x {
                path.push(elbow);
            }
            path.push(x);
            let _ = cap;
            Ok(path)
        }
        (Some(e), None) => Ok(stub(&e)),
        (None, Some(x)) => {
            let mut p = stub(&x);
            p.reverse();
            Ok(p)
        }
        (None, None) => {
            // whole chain inside one parent: a short horizontal path
            let r = &parent.width() / &Scalar::from_int(8);
            Ok(vec![
                Point::new(&center.x - &r, center.y.clone()),
                Point::new(&center.x + &r, center.y.clone()),
            ])
        }
    }
}

/// Thread `count` boxes along a rectilinear path, inflated pieces of equal
/// 1-d length.
fn thread_path(
    path: &[Point],
    count: usize,
    parent: &Rect,
    cap: &Scalar,
    margin_cap: &Scalar,
    start_link: usize,
    out: &mut Vec<Rect>,
) -> Result<(), LayoutErr> {
    let mut leg_lens: Vec<Scalar> = Vec::new();
    for w in path.windows(2) {
        leg_lens.push((&w[1].x - &w[0].x).abs() + (&w[1].y - &w[0].y).abs());
    }
    let total: Scalar = leg_lens
        .iter()
        .fold(Scalar::zero(), |acc, l| &acc + l);
    if total.is_zero() {
        return Err(("degenerate run path".to_string(), start_link));
    }
    let piece = &total / &Scalar::from_int(count as i64);
    // clearance of the path inside the parent box
    let mut clearance: Option<Scalar> = None;
    for p in path {
        for d in [
            &p.x - &parent.min.x,
            &parent.max.x - &p.x,
            &p.y - &parent.min.y,
            &parent.max.y - &p.y,
        ] {
            clearance = Some(match clearance.take() {
                None => d,
                Some(c) => c.min(d),
            });
        }
    }
    let clearance = clearance.unwrap();
    if !clearance.is_positive() {
        return Err(("run path touches the parent boundary".to_string(), start_link));
    }
    let delta = margin_cap
        .clone()
        .min(clearance.half())
        .min(&(cap - &piece) / &Scalar::from_int(4))
        .half()
        .half();
    if !delta.is_positive() {
        return Err((
            "run too short for the diameter cap; add links".to_string(),
            start_link,
        ));
    }
    let at = |s: &Scalar| -> Point {
        let mut rest = s.clone();
        let last_leg = leg_lens.len() - 1;
        for (i, (w, len)) in path.windows(2).zip(leg_lens.iter()).enumerate() {
            if &rest <= len || i == last_leg {
                if len.is_zero() {
                    return w[0].clone();
                }
                let t = &rest / len;
                let t = if t > Scalar::one() { Scalar::one() } else { t };
                return crate::geometry::point_at(&w[0], &w[1], &t);
            }
            rest = &rest - len;
        }
        path.last().unwrap().clone()
    };
    for i in 0..count {
        let s0 = &piece * &Scalar::from_int(i as i64);
        let s1 = &piece * &Scalar::from_int(i as i64 + 1);
        let a = at(&s0);
        let b = at(&s1);
        // include the elbow if the piece spans it
        let mut corner: Option<Point> = None;
        if path.len() == 3 {
            let elbow_s = leg_lens[0].clone();
            if s0 < elbow_s && elbow_s < s1 {
                corner = Some(path[1].clone());
            }
        }
        let mut bb = Rect::of_points(&a, &b);
        if let Some(c) = corner {
            let lo = Point::new(
                if c.x < bb.min.x { c.x.clone() } else { bb.min.x.clone() },
                if c.y < bb.min.y { c.y.clone() } else { bb.min.y.clone() },
            );
            let hi = Point::new(
                if c.x > bb.max.x { c.x } else { bb.max.x.clone() },
                if c.y > bb.max.y { c.y } else { bb.max.y.clone() },
            );
            bb = Rect { min: lo, max: hi };
        }
        let rect = bb.inflate(&delta);
        if !Rect::strictly_inside(&rect, parent) {
            return Err(("threaded box leaves the parent".to_string(), start_link + i));
        }
        if rect.width() > *cap || rect.height() > *cap {
            return Err((
                "threaded box exceeds the diameter cap; add links".to_string(),
                start_link + i,
            ));
        }
        out.push(rect);
    }
    Ok(())
}

/// Polyline-through-centers fence of the deepest realization level.
pub fn realization_skeleton(realization: &RectRealization) -> Result<Fence, ModelError> {
    let deepest = realization.levels.last().expect("nonempty realization");
    let mut arcs: Vec<Vec<Point>> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    for chain in deepest {
        let mut centers: Vec<Point> = Vec::new();
        for b in chain {
            let c = b.center();
            if centers.last() != Some(&c) {
                centers.push(c);
            }
        }
        if centers.len() == 1 {
            points.push(centers.pop().unwrap());
        } else {
            arcs.push(centers);
        }
    }
    validate_fence(arcs, points)
}

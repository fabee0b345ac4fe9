//! fencelab-core: an exact-arithmetic workbench for polygonal fences and
//! fans in the plane.
//!
//! The crate classifies circle/fence intersections, detects bends and
//! computes bend spectra, certifies pierced neighborhoods, builds chain
//! covers with refinement patterns, and realizes abstract patterns as nested
//! rectangle chains. All predicates are decided in exact rational arithmetic;
//! irrational crossing parameters travel as quadratic root tokens.

pub mod algebra;
pub mod chains;
pub mod geometry;
pub mod limits;
pub mod model;
pub mod order;
pub mod pattern;
pub mod pierce;
pub mod probe;
pub mod sampling;
pub mod scalar;

pub use algebra::{Param, QuadRoot, RootSide};
pub use geometry::{Point, RadialProfile, SquaredRadius};
pub use model::{Fan, Fence, FenceDocument, PolyArc};
pub use chains::{build_cover, validate_cover, Chain, Cover, Rect};
pub use limits::upper_limit;
pub use pattern::{extract_pattern, realize_pattern, validate_realization, ChainPattern, RectRealization};
pub use order::{CutOrder, Dir};
pub use pierce::{OpenRegion, PiercingCertificate, PiercingOutcome};
pub use probe::{AnnulusProbe, ArcPos, Bend, BendSpectrum, CircleProbe, CrossingEvent, EventKind};
pub use scalar::{Scalar, Sign};

//! Packaged experiment: bumps whose touch radii approach 1 from below.
//!
//! Builds the nested bump family with apex heights `1 - 1/n`, finds the one
//! bend each bump makes over a common terminating circle, estimates the
//! upper limit of the touch-point sets, probes the limit fence at the unit
//! circle, and audits endpoint monotonicity across radii.

use serde::Serialize;

use fencelab_core::geometry::{point_at, Point, SquaredRadius};
use fencelab_core::limits::upper_limit;
use fencelab_core::model::{scaled_v_bumps, Fence};
use fencelab_core::order::{cut_order, separates_from_infinity, Dir};
use fencelab_core::probe::{
    find_bends, has_bend, AnnulusProbe, CircleProbe, ComponentRef, CrossingEvent, EventKind,
    ProbeError,
};
use fencelab_core::scalar::Scalar;

/// Terminating squared radius shared by every bump of the family: above all
/// leg minima (`(1-1/n)^2 / 5 < 1/5`) and below all apexes (`>= 1/4`).
fn common_q2() -> SquaredRadius {
    SquaredRadius::ratio(6, 25)
}

#[derive(Debug, Serialize)]
pub struct CombLimitReport {
    pub n_max: u32,
    pub q2: Scalar,
    pub touch_radii: Vec<Scalar>,
    pub touch_points: Vec<Point>,
    pub limit_estimate: Vec<Point>,
    pub tangency: bool,
    pub tangency_witness: Option<CrossingEvent>,
    pub endpoint_monotone: bool,
    /// Cut-order indices `(a, b)` of each bend's endpoints, by radius.
    pub endpoint_positions: Vec<(usize, usize)>,
}

pub fn comb_limit(n_max: u32) -> Result<CombLimitReport, ProbeError> {
    if n_max < 3 {
        return Err(ProbeError::BadParams(format!(
            "comb-limit needs n >= 3, got {n_max}"
        )));
    }
    let lambdas: Vec<Scalar> = (2..=n_max as i64)
        .map(|n| &Scalar::one() - &Scalar::ratio(1, n))
        .collect();
    let family: Fence = scaled_v_bumps(&lambdas).expect("nested bump family is valid");
    let origin = Point::from_ints(0, 0);
    let q2 = common_q2();

    let order = cut_order(
        &family,
        &CircleProbe {
            center: origin.clone(),
            r2: q2.clone(),
        },
    )?;
    let theta = Dir::from_ints(0, 1);

    let mut touch_radii = Vec::new();
    let mut touch_points = Vec::new();
    let mut touch_sets: Vec<Vec<Point>> = Vec::new();
    let mut endpoint_positions = Vec::new();
    for lam in &lambdas {
        let r2 = SquaredRadius::new(lam.square()).expect("positive scale");
        touch_radii.push(r2.value().clone());
        let annulus = AnnulusProbe::new(origin.clone(), q2.clone(), r2)?;
        let bends = find_bends(&family, &annulus)?;
        assert_eq!(bends.len(), 1, "one bend per touch radius");
        let bend = &bends[0];
        assert!(separates_from_infinity(bend, &theta, &order)?);
        let vs = family.arcs()[bend.arc].vertices();
        let touches: Vec<Point> = bend
            .touches
            .iter()
            .map(|p| {
                let t = p.t.as_rational().expect("apex touch is a vertex");
                point_at(&vs[p.seg], &vs[p.seg + 1], t)
            })
            .collect();
        touch_points.extend(touches.iter().cloned());
        touch_sets.push(touches);
        let ia = order
            .position_of(ComponentRef::Arc(bend.arc), Some(&bend.start))
            .expect("endpoint in order");
        let ib = order
            .position_of(ComponentRef::Arc(bend.arc), Some(&bend.end))
            .expect("endpoint in order");
        endpoint_positions.push((ia.min(ib), ia.max(ib)));
    }

    // estimator resolution matched to the family's tail spacing: apexes
    // near the top are 1/(n(n-1)) apart, about 1/90 at n_max = 10
    let tail = (touch_sets.len() / 2).max(1);
    let limit_estimate = upper_limit(&touch_sets, &Scalar::ratio(1, 50), tail)?;

    // the limit fence adds the unit bump; probing the unit circle there
    // must report an inward tangency
    let mut all = lambdas.clone();
    all.push(Scalar::one());
    let limit_fence = scaled_v_bumps(&all).expect("limit family is valid");
    let witness = has_bend(
        &limit_fence,
        &CircleProbe {
            center: origin,
            r2: SquaredRadius::ratio(1, 1),
        },
    )?;
    let tangency = matches!(
        &witness,
        Some(w) if w.kind == EventKind::TangentInside
    );

    // endpoints widen with the touch radius
    let endpoint_monotone = endpoint_positions
        .windows(2)
        .all(|w| w[1].0 <= w[0].0 && w[0].1 <= w[1].1);

    Ok(CombLimitReport {
        n_max,
        q2: q2.into_value(),
        touch_radii,
        touch_points,
        limit_estimate,
        tangency,
        tangency_witness: witness,
        endpoint_monotone,
        endpoint_positions,
    })
}

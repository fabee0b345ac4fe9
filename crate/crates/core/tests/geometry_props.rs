//! Kernel invariants checked against brute-force oracles.

use fencelab_core::algebra::Param;
use fencelab_core::geometry::{
    circle_segment_events, distance2, point_at, radial_profile, SegComponent, SideSign,
    SquaredRadius,
};
use fencelab_core::probe::fence_critical_radii;
use fencelab_core::sampling::Sampler;
use fencelab_core::scalar::{Scalar, Sign};

/// Evaluating the profile at any rational parameter equals the squared
/// distance computed directly. Exact, no tolerance.
#[test]
fn profile_evaluation_is_exact() {
    let mut s = Sampler::from_env();
    for _ in 0..1000 {
        let a = s.point_in(-4, 4, -4, 4);
        let mut b = s.point_in(-4, 4, -4, 4);
        if a == b {
            b = fencelab_core::geometry::Point::new(&b.x + &Scalar::ratio(1, 4), b.y.clone());
        }
        let c = s.point_in(-6, 6, -6, 6);
        let profile = radial_profile(&a, &b, &c).unwrap();
        let t = s.rational(0, 64, 64);
        assert_eq!(profile.eval(&t), distance2(&point_at(&a, &b, &t), &c));
    }
}

/// Brute-force oracle: sampling the sign of `f^2 - r^2` on a fine grid is
/// consistent with the reported events. Every sign change happens inside
/// some event's isolating interval, and the events' flank signs match the
/// grid signs next to them.
#[test]
fn event_signs_match_dense_sampling() {
    let mut s = Sampler::from_env();
    let grid: i64 = 10_000;
    for case in 0..50 {
        let a = s.point_in(-4, 4, -4, 4);
        let mut b = s.point_in(-4, 4, -4, 4);
        if a == b {
            b = fencelab_core::geometry::Point::new(&b.x + &Scalar::one(), b.y.clone());
        }
        let c = s.point_in(-5, 5, -5, 5);
        let profile = radial_profile(&a, &b, &c).unwrap();
        // aim near the profile's range so roots actually occur
        let mid = profile.eval(&Scalar::ratio(1, 2));
        let r2 = &mid + &s.rational(-8, 8, 16);
        let Ok(r2) = SquaredRadius::new(r2) else {
            continue;
        };
        let events: Vec<_> = circle_segment_events(&profile, &r2)
            .into_iter()
            .map(|c| match c {
                SegComponent::Crossing(e) => e,
                SegComponent::Overlap { .. } => panic!("segments cannot overlap circles"),
            })
            .collect();
        // isolating intervals, refined until they are pairwise disjoint and
        // narrower than the grid
        let width = Scalar::ratio(1, 4 * grid);
        let brackets: Vec<(Scalar, Scalar)> =
            events.iter().map(|e| e.t.refined_bracket(&width)).collect();
        let mut prev_sign: Option<Sign> = None;
        let mut prev_t = Scalar::zero();
        for i in 0..=grid {
            let t = Scalar::ratio(i, grid);
            let sign = (&profile.eval(&t) - r2.value()).sign();
            if let (Some(ps), true) = (prev_sign, sign != Sign::Zero) {
                if ps != Sign::Zero && ps != sign {
                    // a sign change must be bracketed by some event
                    let hit = brackets
                        .iter()
                        .any(|(lo, hi)| *lo <= t && prev_t <= *hi);
                    assert!(
                        hit,
                        "case {case}: sign change in ({prev_t}, {t}) outside all events"
                    );
                }
            }
            prev_sign = Some(sign);
            prev_t = t;
        }
        // flank signs agree with dense samples just outside the bracket
        for (e, (lo, hi)) in events.iter().zip(&brackets) {
            if e.before != SideSign::Boundary && lo.is_positive() {
                let probe_t = lo - &Scalar::ratio(1, 100 * grid);
                let sign = (&profile.eval(&probe_t) - r2.value()).sign();
                let expect = if e.before == SideSign::Inside {
                    Sign::Neg
                } else {
                    Sign::Pos
                };
                if !(events.iter().zip(&brackets).any(|(_, (l2, h2))| {
                    (l2, h2) != (lo, hi) && *l2 <= probe_t && probe_t <= *h2
                })) {
                    assert_eq!(sign, expect, "case {case}: flank before mismatch");
                }
            }
            if e.after != SideSign::Boundary && hi < &Scalar::one() {
                let probe_t = hi + &Scalar::ratio(1, 100 * grid);
                let sign = (&profile.eval(&probe_t) - r2.value()).sign();
                let expect = if e.after == SideSign::Inside {
                    Sign::Neg
                } else {
                    Sign::Pos
                };
                if !(events.iter().zip(&brackets).any(|(_, (l2, h2))| {
                    (l2, h2) != (lo, hi) && *l2 <= probe_t && probe_t <= *h2
                })) {
                    assert_eq!(sign, expect, "case {case}: flank after mismatch");
                }
            }
        }
    }
}

/// Away from the critical radii every event is a simple transversal
/// crossing; checked over 500 random probes.
#[test]
fn noncritical_radii_give_only_transversal_events() {
    use fencelab_core::probe::{classify_circle, CircleProbe, EventKind};
    let mut s = Sampler::from_env();
    let mut probes = 0;
    while probes < 500 {
        let fence = s.fence(6, 6);
        let center = s.center();
        for _ in 0..5 {
            let r2 = s.noncritical_radius(&fence, &center, &Scalar::from_int(40));
            let events = classify_circle(
                &fence,
                &CircleProbe {
                    center: center.clone(),
                    r2,
                },
            );
            for e in &events {
                assert_eq!(e.kind, EventKind::Transversal, "event {e:?}");
            }
            probes += 1;
        }
    }
}

/// The critical set contains every radius at which a non-transversal event
/// can occur (checked by classifying at each critical radius and at nearby
/// noncritical ones).
#[test]
fn critical_radii_catch_every_tangency() {
    use fencelab_core::probe::{classify_circle, CircleProbe, EventKind};
    let mut s = Sampler::from_env();
    for _ in 0..40 {
        let fence = s.fence(4, 4);
        let center = s.center();
        for r2 in fence_critical_radii(&fence, &center) {
            let events = classify_circle(
                &fence,
                &CircleProbe {
                    center: center.clone(),
                    r2,
                },
            );
            // classification at critical radii is total and well-formed
            for e in &events {
                assert!(e.kind != EventKind::Overlap);
                if e.kind == EventKind::Transversal {
                    assert!(e.before != e.after);
                }
            }
        }
    }
}

/// Parameters on the same segment order consistently with their brackets.
#[test]
fn event_parameters_are_ordered() {
    let mut s = Sampler::from_env();
    for _ in 0..200 {
        let a = s.point_in(-4, 4, -4, 4);
        let mut b = s.point_in(-4, 4, -4, 4);
        if a == b {
            b = fencelab_core::geometry::Point::new(b.x.clone(), &b.y + &Scalar::one());
        }
        let c = s.point_in(-5, 5, -5, 5);
        let profile = radial_profile(&a, &b, &c).unwrap();
        let lo = profile.eval(&Scalar::zero());
        let hi = profile.eval(&Scalar::one());
        let r2 = Scalar::midpoint(&lo.min(hi.clone()), &hi) + Scalar::ratio(1, 64);
        let Ok(r2) = SquaredRadius::new(r2) else {
            continue;
        };
        let events = circle_segment_events(&profile, &r2);
        let params: Vec<Param> = events
            .iter()
            .map(|c| match c {
                SegComponent::Crossing(e) => e.t.clone(),
                SegComponent::Overlap { .. } => unreachable!(),
            })
            .collect();
        for w in params.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}

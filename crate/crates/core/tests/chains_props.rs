//! Chain-cover and pattern invariants on random fences, plus the roundtrip
//! from extracted patterns through realization back to probeable fences.

use fencelab_core::chains::{build_cover, validate_cover, Rect};
use fencelab_core::geometry::{Point, SquaredRadius};
use fencelab_core::model::{generate, Family, ModelPayload};
use fencelab_core::pattern::{
    extract_pattern, realization_skeleton, realize_pattern, validate_realization,
};
use fencelab_core::pierce::pierced_ball;
use fencelab_core::probe::bend_spectrum;
use fencelab_core::sampling::Sampler;
use fencelab_core::scalar::Scalar;

#[test]
fn built_covers_validate_on_random_fences() {
    let mut s = Sampler::from_env();
    for round in 0..60 {
        let fence = s.fence(4, 4);
        for eps2 in [
            SquaredRadius::ratio(1, 4),
            SquaredRadius::ratio(1, 16),
        ] {
            let cover = build_cover(&fence, &eps2);
            assert_eq!(
                cover.chains.len(),
                fence.arcs().len() + fence.points().len()
            );
            let violations = validate_cover(&fence, &cover);
            assert!(violations.is_empty(), "round {round}: {violations:?}");
            for chain in &cover.chains {
                for link in &chain.links {
                    assert!(&link.diameter2() < eps2.value());
                }
            }
        }
    }
}

#[test]
fn extracted_patterns_refine_and_satisfy_the_nine_link_rule() {
    let fixtures = [
        generate(&Family::VBump).unwrap(),
        generate(&Family::SegmentRow { n: 2 }).unwrap(),
        generate(&Family::Comb { n: 3 }).unwrap(),
    ];
    for model in fixtures {
        let ModelPayload::Fence(fence) = model else {
            panic!()
        };
        let pattern = extract_pattern(&fence, 3);
        assert!(pattern.validate().is_empty());
        for level in &pattern.levels[1..] {
            for chain in &level.chains {
                let walk = chain.walk();
                assert!(walk
                    .windows(2)
                    .all(|w| w[1] == w[0] || w[1] == w[0] + 1));
                if chain.links.len() < 9 {
                    let lo = walk.iter().min().unwrap();
                    let hi = walk.iter().max().unwrap();
                    assert!(hi - lo <= 1);
                }
            }
        }
    }
}

#[test]
fn realizations_of_extracted_patterns_validate() {
    let mut s = Sampler::from_env();
    let root = Rect::new(Point::from_ints(0, 0), Point::from_ints(32, 32));
    for _ in 0..12 {
        let fence = s.fence(3, 3);
        let pattern = extract_pattern(&fence, 2);
        let realization = realize_pattern(&pattern, &root).unwrap();
        let violations = validate_realization(&pattern, &realization);
        assert!(violations.is_empty(), "{violations:?}");
    }
}

/// Closing the loop: the deepest realized level's center-polyline skeleton
/// is itself a fence with a finite bend spectrum that admits pierced balls.
#[test]
fn roundtrip_skeletons_admit_pierced_balls() {
    let mut s = Sampler::from_env();
    let root = Rect::new(Point::from_ints(0, 0), Point::from_ints(32, 32));
    for _ in 0..8 {
        let fence = s.fence(3, 3);
        let pattern = extract_pattern(&fence, 2);
        let realization = realize_pattern(&pattern, &root).unwrap();
        let skeleton = realization_skeleton(&realization).unwrap();
        let p = s.center();
        let spectrum = bend_spectrum(&skeleton, &p);
        let features: usize = skeleton
            .arcs()
            .iter()
            .map(|a| a.vertices().len() + a.segment_count())
            .sum();
        assert!(spectrum.entries.len() <= features.max(1));
        let (r2, cert) = pierced_ball(&skeleton, &p, &SquaredRadius::ratio(1, 1));
        assert!(r2.value().is_positive());
        assert!(spectrum.entries.iter().all(|e| e.r2 != r2));
        drop(cert);
    }
}

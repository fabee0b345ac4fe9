//! Finite surrogate for the upper limit of a sequence of point sets.
//!
//! A point survives when a majority of the last `tail` sets come within
//! `delta` of it; that is the desk-scale replacement for "every neighborhood
//! meets infinitely many sets".

use crate::geometry::{distance2, Point};
use crate::probe::ProbeError;
use crate::scalar::Scalar;

/// Points recurring in the tail of the sequence, deduplicated within `delta`.
pub fn upper_limit(
    sets: &[Vec<Point>],
    delta: &Scalar,
    tail: usize,
) -> Result<Vec<Point>, ProbeError> {
    if sets.is_empty() {
        return Err(ProbeError::BadParams("empty sequence".to_string()));
    }
    if tail == 0 || tail > sets.len() {
        return Err(ProbeError::BadParams(format!(
            "tail must be in 1..={}, got {tail}",
            sets.len()
        )));
    }
    if !delta.is_positive() {
        return Err(ProbeError::BadParams("delta must be positive".to_string()));
    }
    let delta2 = delta.square();
    let window = &sets[sets.len() - tail..];
    let needed = tail.div_ceil(2);

    let mut candidates: Vec<Point> = sets.iter().flatten().cloned().collect();
    candidates.sort();
    candidates.dedup();

    let mut kept: Vec<Point> = Vec::new();
    for x in candidates {
        let hits = window
            .iter()
            .filter(|set| set.iter().any(|p| distance2(p, &x) <= delta2))
            .count();
        if hits < needed {
            continue;
        }
        if kept.iter().any(|k| distance2(k, &x) <= delta2) {
            continue;
        }
        kept.push(x);
    }
    Ok(kept)
}

//! Graded subdivision of a curve-complex region.

use crate::geometry::GEOM_TOL;
use crate::spaces::{Chain, ComplexRegion};

/// Interior arclengths per segment so that consecutive nodes are at most
/// `grading * max(delta, min_delta)` apart.
pub(crate) fn graded_params(region: &ComplexRegion, grading: f64, min_delta: f64) -> Vec<Vec<f64>> {
    let x = region.complex();
    (0..x.segments().len())
        .map(|seg| {
            let len = x.segment_length(seg);
            let at = |s: f64| x.segments()[seg].at(s);
            let mut out = Vec::new();
            let mut stack = vec![(0.0f64, len, 0u32)];
            while let Some((a, b, depth)) = stack.pop() {
                let mid = 0.5 * (a + b);
                if region.arc_inside_removed(seg, a, b) || depth > 48 {
                    continue;
                }
                let da = region.distance_to_boundary(at(a)).max(min_delta);
                let db = region.distance_to_boundary(at(b)).max(min_delta);
                if b - a > grading * da.min(db) {
                    out.push(mid);
                    stack.push((a, mid, depth + 1));
                    stack.push((mid, b, depth + 1));
                }
            }
            out.sort_by(f64::total_cmp);
            out
        })
        .collect()
}

/// Nodes on each segment, sorted by arclength, as `(s, chain node)`.
pub(crate) fn per_segment(chain: &Chain, segments: usize) -> Vec<Vec<(f64, usize)>> {
    let mut out = vec![Vec::new(); segments];
    for e in &chain.edges {
        out[e.segment].push((e.s0, e.u));
        out[e.segment].push((e.s1, e.v));
    }
    for list in &mut out {
        list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        list.dedup_by(|a, b| a.1 == b.1 && (a.0 - b.0).abs() <= GEOM_TOL);
    }
    out
}

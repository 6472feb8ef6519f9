//! Fixtures shared by the benchmarks.

use qhmetric::estimators::SampleSpec;
use qhmetric::qhgraph::build_mesh;
use qhmetric::scenarios::Builtin;
use qhmetric::{pt, Point, QhMesh};

pub fn builtin_mesh(b: Builtin, grading: f64) -> QhMesh {
    build_mesh(&b.region(), &b.mesh_params(grading)).expect("built-in mesh")
}

/// `n` query pairs spread over the half-plane sampling window.
pub fn halfplane_pairs(n: usize) -> Vec<(Point, Point)> {
    (0..n)
        .map(|i| {
            let s = (i as f64 + 0.5) / n as f64;
            (
                pt(-1.0 + 2.0 * s, 0.3 + 1.7 * s),
                pt(1.0 - 2.0 * s, 2.0 - 1.5 * s),
            )
        })
        .collect()
}

pub fn halfplane_spec(count: usize) -> SampleSpec {
    SampleSpec::new(1, count).with_window(Builtin::HalfPlane.window().expect("planar window"))
}

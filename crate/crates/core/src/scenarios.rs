//! Ready-made regions with mesh and sampling settings that keep every
//! sampled point well inside the meshed area.

use std::sync::Arc;

use crate::geometry::{pt, Rect};
use crate::qhgraph::MeshParams;
use crate::sampling::Window;
use crate::spaces::{ComplexRegion, CurveComplex, PlaneDomain, Region, Segment};

/// The rectangular frame `[-2, 2] x [0, 1]` as four segments: bottom, top,
/// left, right. Shortest paths between `(0, 0)` and `(0, 1)` have length 5,
/// which is declared as its quasiconvexity constant.
pub fn frame_complex() -> Arc<CurveComplex> {
    let x = CurveComplex::new(vec![
        Segment::new(pt(-2.0, 0.0), pt(2.0, 0.0)),
        Segment::new(pt(-2.0, 1.0), pt(2.0, 1.0)),
        Segment::new(pt(-2.0, 0.0), pt(-2.0, 1.0)),
        Segment::new(pt(2.0, 0.0), pt(2.0, 1.0)),
    ])
    .and_then(|x| x.with_quasiconvexity(5.0))
    .expect("frame complex is valid");
    Arc::new(x)
}

/// The frame with the closed middle piece `[-1, 1] x {1}` of the top removed.
pub fn frame_omega() -> ComplexRegion {
    ComplexRegion::new(frame_complex(), &[(pt(-1.0, 1.0), pt(1.0, 1.0))])
        .expect("frame minus the top middle is a region")
}

/// The open bottom side of the frame.
pub fn frame_bottom() -> ComplexRegion {
    ComplexRegion::without_segments(frame_complex(), &[1, 2, 3])
        .expect("bottom side of the frame is a region")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    HalfPlane,
    Punctured,
    Disk,
    LShape,
    FrameOmega,
    FrameBottom,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::HalfPlane,
        Builtin::Punctured,
        Builtin::Disk,
        Builtin::LShape,
        Builtin::FrameOmega,
        Builtin::FrameBottom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::HalfPlane => "halfplane",
            Builtin::Punctured => "punctured",
            Builtin::Disk => "disk",
            Builtin::LShape => "lshape",
            Builtin::FrameOmega => "frame-omega",
            Builtin::FrameBottom => "frame-bottom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn region(self) -> Region {
        match self {
            Builtin::HalfPlane => PlaneDomain::upper_half_plane().into(),
            Builtin::Punctured => PlaneDomain::punctured_plane().into(),
            Builtin::Disk => PlaneDomain::disk(pt(0.0, 0.0), 1.0)
                .expect("unit disk")
                .into(),
            Builtin::LShape => PlaneDomain::polygon(
                vec![
                    pt(0.0, 0.0),
                    pt(2.0, 0.0),
                    pt(2.0, 1.0),
                    pt(1.0, 1.0),
                    pt(1.0, 2.0),
                    pt(0.0, 2.0),
                ],
                vec![],
            )
            .expect("L-shaped polygon")
            .into(),
            Builtin::FrameOmega => frame_omega().into(),
            Builtin::FrameBottom => frame_bottom().into(),
        }
    }

    pub fn mesh_params(self, grading: f64) -> MeshParams {
        match self {
            Builtin::HalfPlane => MeshParams::new(grading, Rect::new(-6.0, 0.0, 6.0, 8.0)),
            Builtin::Punctured => {
                MeshParams::new(grading, Rect::new(-8.0, -8.0, 8.0, 8.0)).with_min_delta(0.1)
            }
            Builtin::Disk => {
                MeshParams::new(grading, Rect::centered(pt(0.0, 0.0), 1.0)).with_min_delta(0.01)
            }
            Builtin::LShape => {
                MeshParams::new(grading, Rect::new(0.0, 0.0, 2.0, 2.0)).with_min_delta(0.01)
            }
            Builtin::FrameOmega | Builtin::FrameBottom => MeshParams {
                grading,
                bbox: None,
                min_delta: Some(0.01),
            },
        }
    }

    /// Sampling window for planar regions; complexes sample by arclength.
    pub fn window(self) -> Option<Window> {
        match self {
            Builtin::HalfPlane => Some(Window::Rect(Rect::new(-1.0, 0.3, 1.0, 2.0))),
            Builtin::Punctured => Some(Window::Annulus {
                center: pt(0.0, 0.0),
                inner: 0.2,
                outer: 5.0,
            }),
            Builtin::Disk => Some(Window::Annulus {
                center: pt(0.0, 0.0),
                inner: 0.0,
                outer: 0.9,
            }),
            Builtin::LShape => Some(Window::Rect(Rect::new(0.1, 0.1, 1.9, 1.9))),
            Builtin::FrameOmega | Builtin::FrameBottom => None,
        }
    }
}

//! Analytic proper subdomains of the Euclidean plane.

use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};
use crate::geometry::{dist, dot, point_segment_distance, segments_intersect, GEOM_TOL};
use crate::Point;

/// A proper open connected subset of the plane with a closed-form boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneDomain {
    /// `{p : <normal, p> > offset}` with a unit normal.
    HalfPlane { normal: Point, offset: f64 },
    /// The plane with one point removed.
    Punctured { center: Point },
    /// Open disk.
    Disk { center: Point, radius: f64 },
    /// Interior of a simple polygon minus the closed polygonal holes.
    Polygon {
        outer: Vec<Point>,
        #[serde(default)]
        holes: Vec<Vec<Point>>,
    },
}

impl PlaneDomain {
    /// `{y > 0}`.
    pub fn upper_half_plane() -> Self {
        PlaneDomain::HalfPlane {
            normal: Point::new(0.0, 1.0),
            offset: 0.0,
        }
    }

    /// `C \ {0}`.
    pub fn punctured_plane() -> Self {
        PlaneDomain::Punctured {
            center: Point::new(0.0, 0.0),
        }
    }

    pub fn half_plane(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n.is_finite() && n > 0.0 && offset.is_finite()) {
            return Err(QhError::Configuration(
                "half-plane normal must be a finite nonzero vector".into(),
            ));
        }
        Ok(PlaneDomain::HalfPlane {
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(QhError::Configuration(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(PlaneDomain::Disk { center, radius })
    }

    pub fn polygon(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        if outer.len() < 3 || holes.iter().any(|h| h.len() < 3) {
            return Err(QhError::Configuration(
                "polygon rings need at least three vertices".into(),
            ));
        }
        Ok(PlaneDomain::Polygon { outer, holes })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PlaneDomain::HalfPlane { .. } => "half-plane",
            PlaneDomain::Punctured { .. } => "punctured plane",
            PlaneDomain::Disk { .. } => "disk",
            PlaneDomain::Polygon { .. } => "polygon",
        }
    }

    /// Distance from an arbitrary point of the plane to the boundary set.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        match self {
            PlaneDomain::HalfPlane { normal, offset } => (dot(*normal, p) - offset).abs(),
            PlaneDomain::Punctured { center } => dist(p, *center),
            PlaneDomain::Disk { center, radius } => (radius - dist(p, *center)).abs(),
            PlaneDomain::Polygon { outer, holes } => std::iter::once(outer)
                .chain(holes.iter())
                .flat_map(|ring| ring_edges(ring))
                .map(|(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        if !(p.re.is_finite() && p.im.is_finite()) {
            return false;
        }
        match self {
            PlaneDomain::HalfPlane { normal, offset } => dot(*normal, p) - offset > 0.0,
            PlaneDomain::Punctured { center } => p != *center,
            PlaneDomain::Disk { center, radius } => dist(p, *center) < *radius,
            PlaneDomain::Polygon { outer, holes } => {
                if self.distance_to_boundary(p) <= 0.0 {
                    return false;
                }
                let crossings = std::iter::once(outer)
                    .chain(holes.iter())
                    .filter(|ring| ring_contains(ring, p))
                    .count();
                crossings % 2 == 1
            }
        }
    }

    /// δ_G(p); errors when `p` is not in the domain.
    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(QhError::membership(p, self.name()));
        }
        Ok(self.distance_to_boundary(p))
    }

    /// Whether the closed segment `[p, q]` lies in the domain. Both endpoints
    /// are assumed to be members.
    pub fn segment_inside(&self, p: Point, q: Point) -> bool {
        match self {
            PlaneDomain::HalfPlane { .. } | PlaneDomain::Disk { .. } => true,
            PlaneDomain::Punctured { center } => point_segment_distance(*center, p, q) > 1e-12,
            PlaneDomain::Polygon { outer, holes } => !std::iter::once(outer)
                .chain(holes.iter())
                .flat_map(|ring| ring_edges(ring))
                .any(|(a, b)| segments_intersect(p, q, a, b)),
        }
    }

    /// Equality up to [`GEOM_TOL`] on every parameter.
    pub fn approx_eq(&self, other: &PlaneDomain) -> bool {
        let close = |a: Point, b: Point| dist(a, b) <= GEOM_TOL;
        let close_rings = |a: &[Point], b: &[Point]| {
            a.len() == b.len() && a.iter().zip(b).all(|(p, q)| close(*p, *q))
        };
        match (self, other) {
            (
                PlaneDomain::HalfPlane { normal, offset },
                PlaneDomain::HalfPlane {
                    normal: n2,
                    offset: o2,
                },
            ) => close(*normal, *n2) && (offset - o2).abs() <= GEOM_TOL,
            (PlaneDomain::Punctured { center }, PlaneDomain::Punctured { center: c2 }) => {
                close(*center, *c2)
            }
            (
                PlaneDomain::Disk { center, radius },
                PlaneDomain::Disk {
                    center: c2,
                    radius: r2,
                },
            ) => close(*center, *c2) && (radius - r2).abs() <= GEOM_TOL,
            (
                PlaneDomain::Polygon { outer, holes },
                PlaneDomain::Polygon {
                    outer: o2,
                    holes: h2,
                },
            ) => {
                close_rings(outer, o2)
                    && holes.len() == h2.len()
                    && holes.iter().zip(h2).all(|(a, b)| close_rings(a, b))
            }
            _ => false,
        }
    }

    /// Image of the domain under `p ↦ A p + b` where `A = [[a, b], [c, d]]`
    /// acts on `(x, y)`. Disks are only supported under similarities.
    pub fn affine_image(&self, m: [f64; 4], shift: Point) -> Result<Self> {
        let [a, b, c, d] = m;
        let det = a * d - b * c;
        if !(det.is_finite() && det.abs() > 1e-14) {
            return Err(QhError::Configuration(
                "affine map must be invertible".into(),
            ));
        }
        let apply = |p: Point| Point::new(a * p.re + b * p.im, c * p.re + d * p.im) + shift;
        match self {
            PlaneDomain::HalfPlane { normal, offset } => {
                // <n, p> > o  with p = A^{-1}(q - s)  <=>  <A^{-T} n, q> > o + <A^{-T} n, s>
                let n2 = Point::new(
                    (d * normal.re - c * normal.im) / det,
                    (-b * normal.re + a * normal.im) / det,
                );
                PlaneDomain::half_plane(n2, offset + dot(n2, shift))
            }
            PlaneDomain::Punctured { center } => Ok(PlaneDomain::Punctured {
                center: apply(*center),
            }),
            PlaneDomain::Disk { center, radius } => {
                let similarity = ((a - d).abs() <= 1e-12 && (b + c).abs() <= 1e-12)
                    || ((a + d).abs() <= 1e-12 && (b - c).abs() <= 1e-12);
                if !similarity {
                    return Err(QhError::Configuration(
                        "the image of a disk is only analytic under a similarity".into(),
                    ));
                }
                PlaneDomain::disk(apply(*center), radius * det.abs().sqrt())
            }
            PlaneDomain::Polygon { outer, holes } => PlaneDomain::polygon(
                outer.iter().map(|p| apply(*p)).collect(),
                holes
                    .iter()
                    .map(|h| h.iter().map(|p| apply(*p)).collect())
                    .collect(),
            ),
        }
    }
}

fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

/// Even-odd ray test.
fn ring_contains(ring: &[Point], p: Point) -> bool {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    #[test]
    fn half_plane_distance_is_height() {
        let g = PlaneDomain::upper_half_plane();
        assert_eq!(g.boundary_distance(pt(3.0, 0.7)).unwrap(), 0.7);
        assert!(g.boundary_distance(pt(0.0, -1.0)).is_err());
        assert!(!g.contains(pt(1.0, 0.0)));
    }

    #[test]
    fn punctured_plane_distance_is_modulus() {
        let g = PlaneDomain::punctured_plane();
        assert!((g.boundary_distance(pt(0.3, 0.4)).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            g.boundary_distance(pt(0.0, 0.0)),
            Err(QhError::Membership { .. })
        ));
        assert!(!g.segment_inside(pt(-1.0, 0.0), pt(1.0, 0.0)));
        assert!(g.segment_inside(pt(-1.0, 0.1), pt(1.0, 0.1)));
    }

    #[test]
    fn polygon_with_hole() {
        let square = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 4.0), pt(0.0, 4.0)];
        let hole = vec![pt(1.0, 1.0), pt(3.0, 1.0), pt(3.0, 3.0), pt(1.0, 3.0)];
        let g = PlaneDomain::polygon(square, vec![hole]).unwrap();
        assert!(g.contains(pt(0.5, 2.0)));
        assert!(!g.contains(pt(2.0, 2.0)));
        assert!(!g.contains(pt(5.0, 2.0)));
        assert!((g.boundary_distance(pt(0.5, 2.0)).unwrap() - 0.5).abs() < 1e-15);
        // crosses the hole
        assert!(!g.segment_inside(pt(0.5, 2.0), pt(3.5, 2.0)));
        assert!(g.segment_inside(pt(0.5, 0.5), pt(3.5, 0.5)));
    }

    #[test]
    fn affine_images() {
        let h = PlaneDomain::upper_half_plane();
        // (x, y) -> (2x, y) keeps the upper half-plane
        let img = h.affine_image([2.0, 0.0, 0.0, 1.0], pt(0.0, 0.0)).unwrap();
        assert!(img.approx_eq(&h));
        // translation by +1 in x
        let img = h.affine_image([1.0, 0.0, 0.0, 1.0], pt(1.0, 0.0)).unwrap();
        assert!(img.approx_eq(&h));
        // shift up by 2: y > 2
        let img = h.affine_image([1.0, 0.0, 0.0, 1.0], pt(0.0, 2.0)).unwrap();
        assert!(img.contains(pt(0.0, 2.5)) && !img.contains(pt(0.0, 1.5)));
        let d = PlaneDomain::disk(pt(0.0, 0.0), 1.0).unwrap();
        assert!(d.affine_image([2.0, 0.0, 0.0, 1.0], pt(0.0, 0.0)).is_err());
        let d2 = d.affine_image([0.0, -2.0, 2.0, 0.0], pt(1.0, 0.0)).unwrap();
        assert!(d2.approx_eq(&PlaneDomain::disk(pt(1.0, 0.0), 2.0).unwrap()));
    }
}

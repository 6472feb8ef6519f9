//! Ambient spaces, subdomains, boundary distances and component balls.

mod ball;
mod complex;
mod plane;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use ball::ComponentBall;
pub use complex::{ArcPoint, Chain, ChainEdge, ComplexRegion, CurveComplex, Segment};
pub use plane::PlaneDomain;

use crate::error::{QhError, Result};
use crate::geometry::dist;
use crate::Point;
use ball::LocalMesh;

/// The ambient metric space `X`.
#[derive(Debug, Clone)]
pub enum SpaceModel {
    /// The Euclidean plane.
    Plane,
    /// A connected union of segments with the restricted Euclidean metric.
    Complex(Arc<CurveComplex>),
}

impl SpaceModel {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            SpaceModel::Plane => p.re.is_finite() && p.im.is_finite(),
            SpaceModel::Complex(c) => c.contains(p),
        }
    }

    fn check(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(QhError::membership(p, "ambient space"))
        }
    }

    pub fn ambient_distance(&self, x: Point, y: Point) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(dist(x, y))
    }

    /// Length metric `d`. Exact: straight segments in the plane, shortest
    /// arc in a complex.
    pub fn length_distance(&self, x: Point, y: Point) -> Result<f64> {
        match self {
            SpaceModel::Plane => self.ambient_distance(x, y),
            SpaceModel::Complex(c) => c.length_distance(x, y),
        }
    }

    /// Largest sampled ratio `d(x, y) / |x - y|`, floored at 1.
    pub fn quasiconvexity_estimate(&self, samples: usize, seed: u64) -> Result<f64> {
        if samples < 2 {
            return Err(QhError::Configuration(
                "quasiconvexity estimate needs at least two samples".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 1.0f64;
        for _ in 0..samples / 2 {
            let (x, y) = loop {
                let x = self.sample(&mut rng);
                let y = self.sample(&mut rng);
                if dist(x, y) > 0.0 {
                    break (x, y);
                }
            };
            let ratio = self.length_distance(x, y)? / dist(x, y);
            best = best.max(ratio);
        }
        Ok(best)
    }

    /// The quasiconvexity constant: 1 for the plane, the declared value for
    /// a complex, otherwise a sampled estimate.
    pub fn quasiconvexity(&self) -> f64 {
        match self {
            SpaceModel::Plane => 1.0,
            SpaceModel::Complex(c) => c
                .declared_quasiconvexity()
                .unwrap_or_else(|| self.quasiconvexity_estimate(20_000, 0).unwrap_or(1.0)),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            SpaceModel::Plane => {
                Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
            SpaceModel::Complex(c) => c.coords(c.sample(rng)),
        }
    }
}

/// A proper subdomain `G` of a [`SpaceModel`].
#[derive(Debug, Clone)]
pub enum Region {
    Plane(PlaneDomain),
    Complex(ComplexRegion),
}

impl From<PlaneDomain> for Region {
    fn from(d: PlaneDomain) -> Self {
        Region::Plane(d)
    }
}

impl From<ComplexRegion> for Region {
    fn from(d: ComplexRegion) -> Self {
        Region::Complex(d)
    }
}

impl Region {
    pub fn space(&self) -> SpaceModel {
        match self {
            Region::Plane(_) => SpaceModel::Plane,
            Region::Complex(r) => SpaceModel::Complex(r.complex().clone()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::Plane(d) => d.name(),
            Region::Complex(_) => "complex region",
        }
    }

    pub fn as_plane(&self) -> Option<&PlaneDomain> {
        match self {
            Region::Plane(d) => Some(d),
            Region::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&ComplexRegion> {
        match self {
            Region::Complex(r) => Some(r),
            Region::Plane(_) => None,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Plane(d) => d.contains(p),
            Region::Complex(r) => r.contains(p),
        }
    }

    /// δ_G(p) for `p ∈ G`.
    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        match self {
            Region::Plane(d) => d.boundary_distance(p),
            Region::Complex(r) => r.boundary_distance(p),
        }
    }

    /// Distance to `∂G` for any point of `X`, inside `G` or not.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        match self {
            Region::Plane(d) => d.distance_to_boundary(p),
            Region::Complex(r) => r.distance_to_boundary(p),
        }
    }

    /// Boundary distance measured in the length metric of `X`.
    pub fn length_boundary_distance(&self, p: Point) -> Result<f64> {
        match self {
            Region::Plane(d) => d.boundary_distance(p),
            Region::Complex(r) => r.length_boundary_distance(p),
        }
    }

    pub fn quasiconvexity(&self) -> f64 {
        self.space().quasiconvexity()
    }

    fn local_mesh(&self, z: Point, reach: f64, h: f64) -> LocalMesh {
        match self {
            Region::Plane(d) => {
                let n = (reach / h).ceil() as i64 + 1;
                let side = (2 * n + 1) as usize;
                let idx = |i: i64, j: i64| ((i + n) as usize) * side + (j + n) as usize;
                let mut points = Vec::with_capacity(side * side);
                for i in -n..=n {
                    for j in -n..=n {
                        points.push(z + Point::new(i as f64 * h, j as f64 * h));
                    }
                }
                let in_region: Vec<bool> = points.iter().map(|p| d.contains(*p)).collect();
                let mut edges = Vec::new();
                for i in -n..=n {
                    for j in -n..=n {
                        for (di, dj) in [(1, 0), (0, 1), (1, 1), (1, -1)] {
                            let (a, b) = (i + di, j + dj);
                            if a > n || b < -n || b > n {
                                continue;
                            }
                            let (u, v) = (idx(i, j), idx(a, b));
                            let inside = in_region[u]
                                && in_region[v]
                                && d.segment_inside(points[u], points[v]);
                            edges.push((u, v, inside));
                        }
                    }
                }
                LocalMesh {
                    points,
                    in_region,
                    edges,
                    center: idx(0, 0),
                }
            }
            Region::Complex(r) => {
                let x = r.complex();
                let extra: Vec<ArcPoint> = x.locate(z).into_iter().collect();
                let chain = x.uniform_chain(h, &extra);
                let in_region: Vec<bool> = chain.points.iter().map(|p| r.contains(*p)).collect();
                let edges = chain
                    .edges
                    .iter()
                    .map(|e| {
                        let inside = in_region[e.u]
                            && in_region[e.v]
                            && !r.arc_hits_removed(e.segment, e.s0, e.s1);
                        (e.u, e.v, inside)
                    })
                    .collect();
                let center = chain.index_of(z).unwrap_or(0);
                LocalMesh {
                    points: chain.points,
                    in_region,
                    edges,
                    center,
                }
            }
        }
    }

    fn check_ball_args(&self, z: Point, r: f64, h: f64) -> Result<()> {
        if !self.contains(z) {
            return Err(QhError::membership(z, self.name()));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(QhError::Configuration(format!(
                "ball radius must be positive, got {r}"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(QhError::Configuration(format!(
                "resolution must be positive, got {h}"
            )));
        }
        Ok(())
    }

    /// The `z`-component of `B(z, r) ∩ G` at mesh spacing `resolution`.
    /// Edges are followed only when the whole edge lies in the ball and in
    /// `G`.
    pub fn component_ball(&self, z: Point, r: f64, resolution: f64) -> Result<ComponentBall> {
        self.check_ball_args(z, r, resolution)?;
        let ball = self.local_mesh(z, r, resolution).flood(r, resolution);
        if ball.len() < 2 {
            return Err(QhError::Resolution(format!(
                "resolution {resolution} places no mesh node besides the center in a ball of radius {r}"
            )));
        }
        Ok(ball)
    }

    /// Mesh nodes of `X` inside the plain ball `B(z, r)`, on the same local
    /// mesh used by [`Region::component_ball`] with the same center.
    pub fn ambient_ball_nodes(&self, z: Point, r: f64, resolution: f64) -> Result<Vec<Point>> {
        self.check_ball_args(z, r, resolution)?;
        Ok(self.local_mesh(z, r, resolution).ambient_ball(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    fn frame() -> Arc<CurveComplex> {
        Arc::new(
            CurveComplex::new(vec![
                Segment::new(pt(-2.0, 0.0), pt(2.0, 0.0)),
                Segment::new(pt(-2.0, 1.0), pt(2.0, 1.0)),
                Segment::new(pt(-2.0, 0.0), pt(-2.0, 1.0)),
                Segment::new(pt(2.0, 0.0), pt(2.0, 1.0)),
            ])
            .unwrap()
            .with_quasiconvexity(5.0)
            .unwrap(),
        )
    }

    #[test]
    fn ambient_distance_examples() {
        let plane = SpaceModel::Plane;
        assert_eq!(
            plane.ambient_distance(pt(0.0, 1.0), pt(0.0, 2.0)).unwrap(),
            1.0
        );
        let x = SpaceModel::Complex(frame());
        assert_eq!(
            x.ambient_distance(pt(0.0, 0.0), pt(-1.0, 1.0)).unwrap(),
            2f64.sqrt()
        );
        assert_eq!(x.ambient_distance(pt(1.0, 0.0), pt(1.0, 0.0)).unwrap(), 0.0);
        assert!(x.ambient_distance(pt(0.0, 0.5), pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn quasiconvexity_estimates() {
        assert_eq!(
            SpaceModel::Plane.quasiconvexity_estimate(100, 3).unwrap(),
            1.0
        );
        let x = SpaceModel::Complex(frame());
        let c = x.quasiconvexity_estimate(20_000, 7).unwrap();
        assert!(c > 4.5 && c <= 5.0 + 1e-12, "{c}");
        assert_eq!(
            x.quasiconvexity_estimate(20_000, 7).unwrap(),
            c,
            "same seed, same estimate"
        );
        assert!(x.quasiconvexity_estimate(1, 7).is_err());
        let seg = SpaceModel::Complex(Arc::new(
            CurveComplex::new(vec![Segment::new(pt(0.0, 0.0), pt(1.0, 0.0))]).unwrap(),
        ));
        assert_eq!(seg.quasiconvexity_estimate(2, 1).unwrap(), 1.0);
    }

    #[test]
    fn convex_component_ball_is_the_disk() {
        let g = Region::Plane(PlaneDomain::upper_half_plane());
        let z = pt(0.0, 1.0);
        let ball = g.component_ball(z, 0.5, 0.05).unwrap();
        let disk = g.ambient_ball_nodes(z, 0.5, 0.05).unwrap();
        assert_eq!(ball.len(), disk.len());
        assert!(ball.nodes.iter().all(|p| dist(*p, z) < 0.5));
        let f = ball.frontier_distance();
        assert!((0.5..=0.55 + 1e-12).contains(&f), "{f}");
    }

    #[test]
    fn punctured_ball_wraps_around_the_puncture() {
        let g = Region::Plane(PlaneDomain::punctured_plane());
        let z = pt(0.5, 0.0);
        // r > δ: the ball contains the puncture but stays connected
        let ball = g.component_ball(z, 1.0, 0.05).unwrap();
        assert!(ball.contains_node(pt(-0.4, 0.0)));
        assert!(!ball.contains_node(pt(0.0, 0.0)));
    }

    #[test]
    fn coarse_resolution_is_an_error() {
        let g = Region::Plane(PlaneDomain::upper_half_plane());
        assert!(matches!(
            g.component_ball(pt(0.0, 1.0), 0.1, 0.5),
            Err(QhError::Resolution(_))
        ));
        assert!(g.component_ball(pt(0.0, -1.0), 0.1, 0.01).is_err());
    }

    #[test]
    fn complex_component_balls() {
        let x = frame();
        let omega = Region::Complex(
            ComplexRegion::new(x.clone(), &[(pt(-1.0, 1.0), pt(1.0, 1.0))]).unwrap(),
        );
        let d = Region::Complex(ComplexRegion::without_segments(x, &[1, 2, 3]).unwrap());
        let z = pt(0.0, 0.0);
        let small = omega.component_ball(z, 2f64.sqrt(), 0.05).unwrap();
        let large = d.component_ball(z, 2.0, 0.05).unwrap();
        assert!(small
            .nodes
            .iter()
            .all(|p| p.im == 0.0 && p.re.abs() < 2f64.sqrt()));
        assert!(large.nodes.iter().all(|p| p.im == 0.0 && p.re.abs() < 2.0));
        // every interior node of the bottom segment
        assert_eq!(large.len(), 79);
        assert!(small.is_subset_of(&large) && !large.is_subset_of(&small));
    }
}

//! Graded graph discretizations of `(G, k_G)` and shortest-path distances.

mod chain;
mod exact;
mod inequalities;
mod lattice;
mod search;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use exact::{plane_oracle, qh_distance_exact, ExactDomain};
pub use inequalities::{
    comparison_check, length_comparison_check, InequalityReport, InequalityRow, PairSpec,
};

use crate::error::{QhError, Result};
use crate::geometry::{dist, Rect, GEOM_TOL};
use crate::spaces::{PlaneDomain, Region};
use crate::Point;
use lattice::{Lattice, REACH};
use search::{shortest_route, Attach, Graph, Route};

/// Which boundary distance and edge length enter the weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// `δ_G` and lengths in the ambient metric: `k_G`.
    Ambient,
    /// `δ'_G` and lengths in the length metric `d`: `k'_G`.
    Length,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshParams {
    /// Target ratio of edge spacing to boundary distance, in `(0, 0.5]`.
    pub grading: f64,
    /// Clipping window; required for unbounded planar domains.
    #[serde(default)]
    pub bbox: Option<Rect>,
    /// Nodes closer than this to the boundary are dropped.
    #[serde(default)]
    pub min_delta: Option<f64>,
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams {
            grading: 0.1,
            bbox: None,
            min_delta: None,
        }
    }
}

impl MeshParams {
    pub fn new(grading: f64, bbox: Rect) -> Self {
        MeshParams {
            grading,
            bbox: Some(bbox),
            min_delta: None,
        }
    }

    pub fn with_min_delta(mut self, min_delta: f64) -> Self {
        self.min_delta = Some(min_delta);
        self
    }
}

/// A shortest path between two query points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult {
    /// Sum of `weights`, accumulated left to right.
    pub distance: f64,
    /// Mesh node indices visited, excluding the two query points.
    pub node_path: Vec<u32>,
    /// Query point, visited nodes, query point.
    pub points: Vec<Point>,
    /// Weight of each step between consecutive `points`.
    pub weights: Vec<f64>,
    pub euclidean_length: f64,
}

#[derive(Debug, Clone)]
enum Locator {
    Lattice {
        lattice: Lattice,
        index: HashMap<(i64, i64), u32>,
    },
    Chain {
        per_segment: Vec<Vec<(f64, u32)>>,
    },
}

/// Weighted graph approximating the quasihyperbolic metric of a region.
#[derive(Debug, Clone)]
pub struct QhMesh {
    region: Region,
    params: MeshParams,
    metric: MetricKind,
    points: Vec<Point>,
    delta: Vec<f64>,
    graph: Graph,
    locator: Locator,
}

/// Trapezoid approximation of `∫ |dz| / δ_G` along the segment `[p, q]`.
pub fn qh_weight(region: &Region, p: Point, q: Point) -> Result<f64> {
    let dp = region.boundary_distance(p)?;
    let dq = region.boundary_distance(q)?;
    Ok(trapezoid(dist(p, q), dp, dq))
}

fn trapezoid(len: f64, dp: f64, dq: f64) -> f64 {
    len * (1.0 / dp + 1.0 / dq) / 2.0
}

/// Builds the mesh for `k_G`.
pub fn build_mesh(region: &Region, params: &MeshParams) -> Result<QhMesh> {
    QhMesh::build(region, params, MetricKind::Ambient)
}

/// Builds the mesh for `k'_G`.
pub fn build_length_mesh(region: &Region, params: &MeshParams) -> Result<QhMesh> {
    QhMesh::build(region, params, MetricKind::Length)
}

/// `k_G(x, y)` on a mesh built with [`build_mesh`].
pub fn qh_distance(mesh: &QhMesh, x: Point, y: Point) -> Result<PathResult> {
    mesh.distance(x, y)
}

/// `k'_G(x, y)` on a mesh built with [`build_length_mesh`].
pub fn qh_length_distance(mesh: &QhMesh, x: Point, y: Point) -> Result<PathResult> {
    if mesh.metric != MetricKind::Length {
        return Err(QhError::Configuration(
            "length distances need a mesh built for the length metric".into(),
        ));
    }
    mesh.distance(x, y)
}

fn default_bbox(domain: &PlaneDomain) -> Option<Rect> {
    match domain {
        PlaneDomain::Disk { center, radius } => Some(Rect::centered(*center, *radius)),
        PlaneDomain::Polygon { outer, .. } => {
            let xs = outer.iter().map(|p| p.re);
            let ys = outer.iter().map(|p| p.im);
            Some(Rect::new(
                xs.clone().fold(f64::INFINITY, f64::min),
                ys.clone().fold(f64::INFINITY, f64::min),
                xs.fold(f64::NEG_INFINITY, f64::max),
                ys.fold(f64::NEG_INFINITY, f64::max),
            ))
        }
        _ => None,
    }
}

impl QhMesh {
    pub fn build(region: &Region, params: &MeshParams, metric: MetricKind) -> Result<Self> {
        let g = params.grading;
        if !(g > 0.0 && g <= 0.5) {
            return Err(QhError::Configuration(format!(
                "grading factor must lie in (0, 0.5], got {g}"
            )));
        }
        if let Some(m) = params.min_delta {
            if !(m.is_finite() && m > 0.0) {
                return Err(QhError::Configuration(format!(
                    "min_delta must be positive, got {m}"
                )));
            }
        }
        match region {
            Region::Plane(domain) => Self::build_plane(region, domain, params, metric),
            Region::Complex(_) => Self::build_complex(region, params, metric),
        }
    }

    fn build_plane(
        region: &Region,
        domain: &PlaneDomain,
        params: &MeshParams,
        metric: MetricKind,
    ) -> Result<Self> {
        let bbox = params
            .bbox
            .or_else(|| default_bbox(domain))
            .ok_or_else(|| {
                QhError::Configuration(format!(
                    "the {} is unbounded; a bounding box is required",
                    domain.name()
                ))
            })?;
        if !bbox.is_valid() {
            return Err(QhError::Configuration(format!(
                "degenerate bounding box {bbox:?}"
            )));
        }
        let min_delta = params
            .min_delta
            .unwrap_or(0.01 * bbox.width().min(bbox.height()));
        let lattice = Lattice::new(bbox, params.grading, min_delta);
        let found = lattice.nodes(domain);
        if found.is_empty() {
            return Err(QhError::Configuration(
                "bounding box does not meet the region".into(),
            ));
        }
        let keys: Vec<(i64, i64)> = found.iter().map(|(k, _)| *k).collect();
        let delta: Vec<f64> = found.iter().map(|(_, d)| *d).collect();
        let index: HashMap<(i64, i64), u32> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i as u32))
            .collect();
        let points: Vec<Point> = keys.iter().map(|&(i, j)| lattice.point(i, j)).collect();
        let pairs = lattice.edges(domain, &keys, &delta, &index);
        let edges: Vec<(u32, u32, f64)> = pairs
            .into_iter()
            .map(|(u, v)| {
                let (a, b) = (u as usize, v as usize);
                (
                    u,
                    v,
                    trapezoid(dist(points[a], points[b]), delta[a], delta[b]),
                )
            })
            .collect();
        let (keep, points, delta, graph) = compact(points, delta, &edges);
        let index = keys
            .into_iter()
            .zip(&keep)
            .filter_map(|(k, id)| id.map(|i| (k, i)))
            .collect();
        Ok(QhMesh {
            region: region.clone(),
            params: MeshParams {
                bbox: Some(bbox),
                min_delta: Some(min_delta),
                ..params.clone()
            },
            metric,
            points,
            delta,
            graph,
            locator: Locator::Lattice { lattice, index },
        })
    }

    fn build_complex(region: &Region, params: &MeshParams, metric: MetricKind) -> Result<Self> {
        let cr = region.as_complex().expect("complex region");
        let x = cr.complex();
        let min_delta = params.min_delta.unwrap_or(1e-3 * x.total_length());
        let chain = x.chain(&chain::graded_params(cr, params.grading, min_delta));
        let node_delta = |i: usize| match metric {
            MetricKind::Ambient => cr.distance_to_boundary(chain.points[i]),
            MetricKind::Length => cr.length_boundary_distance_arc(chain.arcs[i]),
        };
        let kept: Vec<bool> = (0..chain.points.len())
            .map(|i| {
                cr.contains(chain.points[i])
                    && cr.distance_to_boundary(chain.points[i]) >= min_delta
            })
            .collect();
        let delta: Vec<f64> = (0..chain.points.len())
            .map(|i| if kept[i] { node_delta(i) } else { f64::NAN })
            .collect();
        let edges: Vec<(u32, u32, f64)> = chain
            .edges
            .iter()
            .filter(|e| kept[e.u] && kept[e.v] && !cr.arc_hits_removed(e.segment, e.s0, e.s1))
            .map(|e| {
                (
                    e.u as u32,
                    e.v as u32,
                    trapezoid(e.s1 - e.s0, delta[e.u], delta[e.v]),
                )
            })
            .collect();
        if edges.is_empty() {
            return Err(QhError::Configuration(
                "mesh of the complex region has no edges".into(),
            ));
        }
        let per_chain = chain::per_segment(&chain, x.segments().len());
        let (keep, points, delta, graph) = compact(chain.points, delta, &edges);
        let per_segment = per_chain
            .into_iter()
            .map(|list| {
                list.into_iter()
                    .filter_map(|(s, i)| keep[i].map(|id| (s, id)))
                    .collect()
            })
            .collect();
        Ok(QhMesh {
            region: region.clone(),
            params: MeshParams {
                min_delta: Some(min_delta),
                ..params.clone()
            },
            metric,
            points,
            delta,
            graph,
            locator: Locator::Chain { per_segment },
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Parameters with the defaults that were actually used filled in.
    pub fn params(&self) -> &MeshParams {
        &self.params
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.points
    }

    /// Boundary distance stored for each node.
    pub fn node_deltas(&self) -> &[f64] {
        &self.delta
    }

    /// Every edge once as `(u, v, length, weight)` with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32, f64, f64)> {
        (0..self.points.len() as u32)
            .flat_map(|u| {
                self.graph
                    .neighbors(u)
                    .filter(move |&(v, _)| v > u)
                    .map(move |(v, w)| {
                        (
                            u,
                            v,
                            dist(self.points[u as usize], self.points[v as usize]),
                            w,
                        )
                    })
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.largest_component().iter().all(|b| *b)
    }

    /// Mesh spacing near `p`, the snapping error budget.
    pub fn local_spacing(&self, p: Point) -> f64 {
        match &self.locator {
            Locator::Lattice { lattice, .. } => {
                let d = self.region.distance_to_boundary(p);
                lattice.spacing(lattice.level_for(d))
            }
            Locator::Chain { .. } => self.params.grading * self.query_delta(p),
        }
    }

    /// Whether `p` is at least `margin` away from the clipping window edge.
    pub fn is_interior(&self, p: Point, margin: f64) -> bool {
        match self.params.bbox {
            Some(b) if self.region.as_plane().is_some() => b.shrink(margin).contains(p),
            _ => true,
        }
    }

    fn query_delta(&self, p: Point) -> f64 {
        match (self.metric, &self.region) {
            (MetricKind::Length, Region::Complex(cr)) => {
                cr.length_boundary_distance(p).unwrap_or(f64::NAN)
            }
            _ => self.region.distance_to_boundary(p),
        }
    }

    fn check_query(&self, p: Point) -> Result<()> {
        if !self.region.contains(p) {
            return Err(QhError::membership(p, self.region.name()));
        }
        if let (Some(b), Region::Plane(_)) = (self.params.bbox, &self.region) {
            if !b.contains(p) {
                return Err(QhError::membership(p, "mesh bounding box"));
            }
        }
        Ok(())
    }

    fn attachments(&self, p: Point, dp: f64) -> Vec<Attach> {
        match (&self.locator, &self.region) {
            (Locator::Lattice { lattice, index }, Region::Plane(domain)) => lattice
                .candidates(p, dp, index)
                .into_iter()
                .filter(|(_, q)| domain.segment_inside(p, *q))
                .map(|(node, q)| Attach {
                    node,
                    weight: trapezoid(dist(p, q), dp, self.delta[node as usize]),
                })
                .collect(),
            (Locator::Chain { per_segment }, Region::Complex(cr)) => {
                let mut out = Vec::new();
                for ap in cr.complex().incidences(p) {
                    for (s, node) in neighbours_on_segment(&per_segment[ap.segment], ap.s) {
                        let (a, b) = (s.min(ap.s), s.max(ap.s));
                        if !cr.arc_hits_removed(ap.segment, a, b) {
                            out.push(Attach {
                                node,
                                weight: trapezoid(b - a, dp, self.delta[node as usize]),
                            });
                        }
                    }
                }
                out.sort_by(|a, b| a.node.cmp(&b.node).then(a.weight.total_cmp(&b.weight)));
                out.dedup_by_key(|a| a.node);
                out
            }
            _ => unreachable!("locator matches region kind"),
        }
    }

    /// Weight of the direct virtual edge between two query points, when
    /// they are close enough for a single edge to be accurate.
    fn direct(&self, x: Point, dx: f64, y: Point, dy: f64) -> Option<f64> {
        match (&self.locator, &self.region) {
            (Locator::Lattice { lattice, .. }, Region::Plane(domain)) => {
                let reach = REACH * lattice.spacing(lattice.level_for(dx.min(dy)));
                (dist(x, y) <= reach && domain.segment_inside(x, y))
                    .then(|| trapezoid(dist(x, y), dx, dy))
            }
            (Locator::Chain { per_segment }, Region::Complex(cr)) => {
                let ax = cr.complex().incidences(x);
                let ay = cr.complex().incidences(y);
                ax.iter()
                    .flat_map(|a| ay.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| a.segment == b.segment)
                    .filter(|(a, b)| {
                        let (lo, hi) = (a.s.min(b.s), a.s.max(b.s));
                        !cr.arc_hits_removed(a.segment, lo, hi)
                            && !per_segment[a.segment]
                                .iter()
                                .any(|(s, _)| *s > lo + GEOM_TOL && *s < hi - GEOM_TOL)
                    })
                    .map(|(a, b)| trapezoid((a.s - b.s).abs(), dx, dy))
                    .fold(None, |acc: Option<f64>, w| {
                        Some(acc.map_or(w, |m| m.min(w)))
                    })
            }
            _ => None,
        }
    }

    /// Shortest path between two points of the region. The result does not
    /// depend on the order of the arguments apart from path orientation.
    pub fn distance(&self, x: Point, y: Point) -> Result<PathResult> {
        self.check_query(x)?;
        self.check_query(y)?;
        if x == y {
            return Ok(PathResult {
                distance: 0.0,
                node_path: Vec::new(),
                points: vec![x],
                weights: Vec::new(),
                euclidean_length: 0.0,
            });
        }
        let swapped = (y.re, y.im) < (x.re, x.im);
        let (a, b) = if swapped { (y, x) } else { (x, y) };
        let (da, db) = (self.query_delta(a), self.query_delta(b));
        let src = self.attachments(a, da);
        let dst = self.attachments(b, db);
        let direct = self.direct(a, da, b, db);
        let route = shortest_route(&self.graph, &src, &dst, direct).ok_or_else(|| {
            QhError::Connectivity(format!(
                "no mesh path joins ({}, {}) and ({}, {})",
                a.re, a.im, b.re, b.im
            ))
        })?;
        let (node_path, weights) = match route {
            Route::Direct => (Vec::new(), vec![direct.expect("direct route has a weight")]),
            Route::Nodes(nodes) => {
                let first = attach_weight(&src, nodes[0]);
                let last = attach_weight(&dst, *nodes.last().expect("nonempty"));
                let mut w = vec![first];
                for pair in nodes.windows(2) {
                    w.push(
                        self.graph
                            .weight(pair[0], pair[1])
                            .expect("path edge exists"),
                    );
                }
                w.push(last);
                (nodes, w)
            }
        };
        let mut points = vec![a];
        points.extend(node_path.iter().map(|&i| self.points[i as usize]));
        points.push(b);
        let distance = weights.iter().fold(0.0, |acc, w| acc + w);
        let euclidean_length = points.windows(2).map(|p| dist(p[0], p[1])).sum();
        let mut result = PathResult {
            distance,
            node_path,
            points,
            weights,
            euclidean_length,
        };
        if swapped {
            result.node_path.reverse();
            result.points.reverse();
            result.weights.reverse();
        }
        Ok(result)
    }
}

fn attach_weight(list: &[Attach], node: u32) -> f64 {
    list.iter()
        .filter(|a| a.node == node)
        .map(|a| a.weight)
        .fold(f64::INFINITY, f64::min)
}

/// Closest kept nodes at or before and at or after arclength `s`.
fn neighbours_on_segment(list: &[(f64, u32)], s: f64) -> Vec<(f64, u32)> {
    let split = list.partition_point(|(t, _)| *t < s);
    let mut out = Vec::new();
    if split > 0 {
        out.push(list[split - 1]);
    }
    if let Some(&next) = list.get(split) {
        out.push(next);
    }
    out
}

type Compacted = (Vec<Option<u32>>, Vec<Point>, Vec<f64>, Graph);

/// Restricts the graph to its largest connected component and renumbers.
fn compact(points: Vec<Point>, delta: Vec<f64>, edges: &[(u32, u32, f64)]) -> Compacted {
    let full = Graph::from_edges(points.len(), edges);
    let mask = full.largest_component();
    let mut keep = vec![None; points.len()];
    let mut next = 0u32;
    for (i, m) in mask.iter().enumerate() {
        if *m {
            keep[i] = Some(next);
            next += 1;
        }
    }
    let new_points = points
        .iter()
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|(p, _)| *p)
        .collect();
    let new_delta = delta
        .iter()
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|(d, _)| *d)
        .collect();
    let new_edges: Vec<(u32, u32, f64)> = edges
        .iter()
        .filter_map(|&(u, v, w)| Some((keep[u as usize]?, keep[v as usize]?, w)))
        .collect();
    let graph = Graph::from_edges(next as usize, &new_edges);
    (keep, new_points, new_delta, graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use crate::spaces::{ComplexRegion, CurveComplex, Segment};
    use std::f64::consts::{LN_2, PI};
    use std::sync::Arc;

    fn half_plane_mesh(g: f64) -> QhMesh {
        let region = Region::Plane(PlaneDomain::upper_half_plane());
        build_mesh(&region, &MeshParams::new(g, Rect::new(-4.0, 0.0, 4.0, 4.0))).unwrap()
    }

    #[test]
    fn half_plane_vertical_pair() {
        let m = half_plane_mesh(0.1);
        let r = m.distance(pt(0.0, 1.0), pt(0.0, 2.0)).unwrap();
        let rel = (r.distance - LN_2) / LN_2;
        assert!(rel.abs() < 0.05, "relative error {rel}");
        assert!(m.is_connected());
    }

    #[test]
    fn weight_bracket_holds_on_every_edge() {
        let m = half_plane_mesh(0.2);
        let d = m.node_deltas();
        for (u, v, len, w) in m.edges() {
            let (a, b) = (d[u as usize], d[v as usize]);
            // δ is affine along edges of a half-plane mesh
            assert!(w >= len / a.max(b) - 1e-12 && w <= len / a.min(b) + 1e-12);
            assert!(len <= REACH * 0.2 * a.max(b) + 1e-9);
        }
    }

    #[test]
    fn symmetric_and_path_sums_match() {
        let m = half_plane_mesh(0.2);
        let (x, y) = (pt(-1.3, 0.4), pt(2.2, 1.7));
        let a = m.distance(x, y).unwrap();
        let b = m.distance(y, x).unwrap();
        assert_eq!(a.distance, b.distance);
        assert_eq!(a.points.first(), Some(&x));
        assert_eq!(b.points.first(), Some(&y));
        let sum: f64 = a.weights.iter().fold(0.0, |s, w| s + w);
        assert_eq!(sum, a.distance);
        assert_eq!(m.distance(x, x).unwrap().distance, 0.0);
    }

    #[test]
    fn punctured_plane_against_log_cylinder() {
        let region = Region::Plane(PlaneDomain::punctured_plane());
        let m = build_mesh(
            &region,
            &MeshParams::new(0.1, Rect::new(-10.0, -10.0, 10.0, 10.0)),
        )
        .unwrap();
        let k = m.distance(pt(1.0, 0.0), pt(0.0, 1.0)).unwrap().distance;
        assert!((k - PI / 2.0).abs() / (PI / 2.0) < 0.05, "{k}");
        let k = m
            .distance(pt(1.0, 0.0), pt(std::f64::consts::E, 0.0))
            .unwrap()
            .distance;
        assert!((k - 1.0).abs() < 0.05, "{k}");
    }

    #[test]
    fn configuration_errors() {
        let region = Region::Plane(PlaneDomain::upper_half_plane());
        let bbox = Rect::new(-1.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            build_mesh(&region, &MeshParams::new(0.6, bbox)),
            Err(QhError::Configuration(_))
        ));
        assert!(matches!(
            build_mesh(
                &region,
                &MeshParams {
                    grading: 0.1,
                    bbox: None,
                    min_delta: None
                }
            ),
            Err(QhError::Configuration(_))
        ));
        assert!(matches!(
            build_mesh(
                &region,
                &MeshParams::new(0.1, Rect::new(-1.0, -3.0, 1.0, -2.0))
            ),
            Err(QhError::Configuration(_))
        ));
    }

    #[test]
    fn complex_length_mesh_is_sandwiched() {
        let x = Arc::new(
            CurveComplex::new(vec![
                Segment::new(pt(-2.0, 0.0), pt(2.0, 0.0)),
                Segment::new(pt(-2.0, 1.0), pt(2.0, 1.0)),
                Segment::new(pt(-2.0, 0.0), pt(-2.0, 1.0)),
                Segment::new(pt(2.0, 0.0), pt(2.0, 1.0)),
            ])
            .unwrap()
            .with_quasiconvexity(5.0)
            .unwrap(),
        );
        let omega: Region = ComplexRegion::new(x, &[(pt(-1.0, 1.0), pt(1.0, 1.0))])
            .unwrap()
            .into();
        let params = MeshParams::default();
        let k = build_mesh(&omega, &params).unwrap();
        let kp = build_length_mesh(&omega, &params).unwrap();
        assert_eq!(k.node_count(), kp.node_count());
        for (a, b) in [(pt(0.0, 0.0), pt(1.5, 1.0)), (pt(-2.0, 0.5), pt(0.3, 0.0))] {
            let d = k.distance(a, b).unwrap().distance;
            let dp = qh_length_distance(&kp, a, b).unwrap().distance;
            assert!(dp <= d && dp >= d / 5.0, "{d} {dp}");
        }
        assert!(qh_length_distance(&k, pt(0.0, 0.0), pt(1.0, 0.0)).is_err());
    }
}

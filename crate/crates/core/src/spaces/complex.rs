//! One-dimensional metric spaces built from straight segments in the plane.
//!
//! Points are addressed by `(segment, arclength)` so that intrinsic distances
//! are computed in closed form from all-pairs vertex distances.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};
use crate::geometry::{dist, point_segment_distance, project_onto_segment, GEOM_TOL};
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }

    pub fn at(&self, s: f64) -> Point {
        let len = self.length();
        self.a + (self.b - self.a) * (s / len)
    }
}

/// A point of a complex: segment index and arclength measured from `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPoint {
    pub segment: usize,
    pub s: f64,
}

#[derive(Debug, Clone)]
pub struct CurveComplex {
    segments: Vec<Segment>,
    lengths: Vec<f64>,
    vertices: Vec<Point>,
    ends: Vec<[usize; 2]>,
    vertex_dist: Vec<Vec<f64>>,
    declared_c: Option<f64>,
}

impl CurveComplex {
    /// Builds the complex, merging endpoints closer than the geometric
    /// tolerance. Fails on degenerate segments or a disconnected union.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(QhError::Configuration(
                "a complex needs at least one segment".into(),
            ));
        }
        let mut vertices: Vec<Point> = Vec::new();
        let mut vertex_of = |p: Point| -> usize {
            if let Some(i) = vertices.iter().position(|v| dist(*v, p) <= GEOM_TOL) {
                i
            } else {
                vertices.push(p);
                vertices.len() - 1
            }
        };
        let mut ends = Vec::with_capacity(segments.len());
        let mut lengths = Vec::with_capacity(segments.len());
        for (i, seg) in segments.iter().enumerate() {
            let len = seg.length();
            if !(len.is_finite() && len > GEOM_TOL) {
                return Err(QhError::Configuration(format!("segment {i} is degenerate")));
            }
            ends.push([vertex_of(seg.a), vertex_of(seg.b)]);
            lengths.push(len);
        }
        let n = vertices.len();
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for (e, len) in ends.iter().zip(&lengths) {
            let [u, v] = *e;
            d[u][v] = d[u][v].min(*len);
            d[v][u] = d[v][u].min(*len);
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        if d[0].iter().any(|x| !x.is_finite()) {
            return Err(QhError::Connectivity(
                "segments of the complex do not form a connected set".into(),
            ));
        }
        Ok(CurveComplex {
            segments,
            lengths,
            vertices,
            ends,
            vertex_dist: d,
            declared_c: None,
        })
    }

    /// Attaches a known quasiconvexity constant.
    pub fn with_quasiconvexity(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 1.0) {
            return Err(QhError::Configuration(format!(
                "quasiconvexity constant must be >= 1, got {c}"
            )));
        }
        self.declared_c = Some(c);
        Ok(self)
    }

    pub fn declared_quasiconvexity(&self) -> Option<f64> {
        self.declared_c
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        self.lengths[i]
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segment_ends(&self, i: usize) -> [usize; 2] {
        self.ends[i]
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.vertex_dist[u][v]
    }

    pub fn coords(&self, p: ArcPoint) -> Point {
        self.segments[p.segment].at(p.s)
    }

    /// Every segment passing within tolerance of `p`.
    pub fn incidences(&self, p: Point) -> Vec<ArcPoint> {
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, seg)| point_segment_distance(p, seg.a, seg.b) <= GEOM_TOL)
            .map(|(i, seg)| ArcPoint {
                segment: i,
                s: project_onto_segment(p, seg.a, seg.b) * self.lengths[i],
            })
            .collect()
    }

    pub fn locate(&self, p: Point) -> Option<ArcPoint> {
        self.incidences(p).into_iter().next()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.locate(p).is_some()
    }

    fn locate_or_err(&self, p: Point) -> Result<ArcPoint> {
        self.locate(p)
            .ok_or_else(|| QhError::membership(p, "curve complex"))
    }

    /// Intrinsic distance from `p` to every vertex.
    pub fn vertex_reach(&self, p: ArcPoint) -> Vec<f64> {
        let [a, b] = self.ends[p.segment];
        let to_b = self.lengths[p.segment] - p.s;
        (0..self.vertices.len())
            .map(|v| (p.s + self.vertex_dist[a][v]).min(to_b + self.vertex_dist[b][v]))
            .collect()
    }

    /// Exact length-metric distance between two located points.
    pub fn arc_distance(&self, x: ArcPoint, y: ArcPoint) -> f64 {
        let [a, b] = self.ends[y.segment];
        let to_b = self.lengths[y.segment] - y.s;
        let [xa, xb] = self.ends[x.segment];
        let x_to_b = self.lengths[x.segment] - x.s;
        let reach =
            |v: usize| (x.s + self.vertex_dist[xa][v]).min(x_to_b + self.vertex_dist[xb][v]);
        let mut best = (reach(a) + y.s).min(reach(b) + to_b);
        if x.segment == y.segment {
            best = best.min((x.s - y.s).abs());
        }
        best
    }

    pub fn ambient_distance(&self, x: Point, y: Point) -> Result<f64> {
        self.locate_or_err(x)?;
        self.locate_or_err(y)?;
        Ok(dist(x, y))
    }

    pub fn length_distance(&self, x: Point, y: Point) -> Result<f64> {
        let ax = self.locate_or_err(x)?;
        let ay = self.locate_or_err(y)?;
        Ok(self.arc_distance(ax, ay))
    }

    /// Uniform sample with respect to arclength.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ArcPoint {
        let mut u = rng.random::<f64>() * self.total_length();
        for (i, len) in self.lengths.iter().enumerate() {
            if u < *len {
                return ArcPoint { segment: i, s: u };
            }
            u -= len;
        }
        let last = self.lengths.len() - 1;
        ArcPoint {
            segment: last,
            s: self.lengths[last],
        }
    }

    /// Subdivision of every segment at the given interior arclengths.
    /// Vertices are always nodes and are shared between segments.
    pub fn chain(&self, interior: &[Vec<f64>]) -> Chain {
        let mut points = self.vertices.clone();
        let mut arcs: Vec<ArcPoint> = (0..self.vertices.len())
            .map(|v| {
                let seg = self.ends.iter().position(|e| e.contains(&v)).unwrap_or(0);
                let s = if self.ends[seg][0] == v {
                    0.0
                } else {
                    self.lengths[seg]
                };
                ArcPoint { segment: seg, s }
            })
            .collect();
        let mut edges = Vec::new();
        for (seg, params) in interior.iter().enumerate().take(self.segments.len()) {
            let len = self.lengths[seg];
            let [a, b] = self.ends[seg];
            let mut prev = (a, 0.0);
            for &s in params {
                if s <= prev.1 + GEOM_TOL || s >= len - GEOM_TOL {
                    continue;
                }
                let idx = points.len();
                points.push(self.segments[seg].at(s));
                arcs.push(ArcPoint { segment: seg, s });
                edges.push(ChainEdge {
                    u: prev.0,
                    v: idx,
                    segment: seg,
                    s0: prev.1,
                    s1: s,
                });
                prev = (idx, s);
            }
            edges.push(ChainEdge {
                u: prev.0,
                v: b,
                segment: seg,
                s0: prev.1,
                s1: len,
            });
        }
        Chain {
            points,
            arcs,
            edges,
        }
    }

    /// Uniform subdivision with spacing at most `h`, plus the listed extra
    /// points inserted on their segments.
    pub fn uniform_chain(&self, h: f64, extra: &[ArcPoint]) -> Chain {
        let params = (0..self.segments.len())
            .map(|seg| {
                let len = self.lengths[seg];
                let n = (len / h).ceil().max(1.0) as usize;
                let mut ps: Vec<f64> = (1..n).map(|i| len * i as f64 / n as f64).collect();
                ps.extend(extra.iter().filter(|p| p.segment == seg).map(|p| p.s));
                ps.sort_by(f64::total_cmp);
                ps.dedup_by(|x, y| (*x - *y).abs() <= GEOM_TOL);
                ps
            })
            .collect::<Vec<_>>();
        self.chain(&params)
    }
}

/// Nodes and along-segment edges of a subdivided complex.
#[derive(Debug, Clone)]
pub struct Chain {
    pub points: Vec<Point>,
    pub arcs: Vec<ArcPoint>,
    pub edges: Vec<ChainEdge>,
}

#[derive(Debug, Clone, Copy)]
pub struct ChainEdge {
    pub u: usize,
    pub v: usize,
    pub segment: usize,
    pub s0: f64,
    pub s1: f64,
}

impl Chain {
    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.points.iter().position(|q| dist(*q, p) <= GEOM_TOL)
    }
}

/// `X` minus finitely many closed arcs.
#[derive(Debug, Clone)]
pub struct ComplexRegion {
    complex: Arc<CurveComplex>,
    removed: Vec<Vec<(f64, f64)>>,
    boundary: Vec<Point>,
}

impl ComplexRegion {
    /// Removes each closed arc `[p, q]`; both endpoints must lie on a
    /// common segment. The boundary relative to `X` is derived from the
    /// removed set.
    pub fn new(complex: Arc<CurveComplex>, removed: &[(Point, Point)]) -> Result<Self> {
        let mut per_segment = vec![Vec::new(); complex.segments.len()];
        for (k, (p, q)) in removed.iter().enumerate() {
            let hit = complex.incidences(*p).into_iter().find_map(|ap| {
                complex
                    .incidences(*q)
                    .into_iter()
                    .find(|aq| aq.segment == ap.segment)
                    .map(|aq| (ap.segment, ap.s.min(aq.s), ap.s.max(aq.s)))
            });
            match hit {
                Some((seg, s0, s1)) => per_segment[seg].push((s0, s1)),
                None => {
                    return Err(QhError::Configuration(format!(
                        "removed arc {k} does not lie on a single segment"
                    )))
                }
            }
        }
        for list in &mut per_segment {
            list.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut merged: Vec<(f64, f64)> = Vec::new();
            for &(s0, s1) in list.iter() {
                match merged.last_mut() {
                    Some(last) if s0 <= last.1 + GEOM_TOL => last.1 = last.1.max(s1),
                    _ => merged.push((s0, s1)),
                }
            }
            *list = merged;
        }
        let mut region = ComplexRegion {
            complex,
            removed: per_segment,
            boundary: Vec::new(),
        };
        region.boundary = region.compute_boundary();
        region.validate()?;
        Ok(region)
    }

    /// Removes whole segments by index.
    pub fn without_segments(complex: Arc<CurveComplex>, segments: &[usize]) -> Result<Self> {
        let arcs: Vec<(Point, Point)> = segments
            .iter()
            .map(|&i| {
                complex
                    .segments
                    .get(i)
                    .map(|s| (s.a, s.b))
                    .ok_or_else(|| QhError::Configuration(format!("no segment {i}")))
            })
            .collect::<Result<_>>()?;
        Self::new(complex, &arcs)
    }

    pub fn complex(&self) -> &Arc<CurveComplex> {
        &self.complex
    }

    pub fn boundary(&self) -> &[Point] {
        &self.boundary
    }

    fn removed_at(&self, p: ArcPoint) -> bool {
        self.removed[p.segment]
            .iter()
            .any(|&(s0, s1)| p.s >= s0 - GEOM_TOL && p.s <= s1 + GEOM_TOL)
    }

    /// Whether the closed sub-arc `[s0, s1]` of a segment meets the removed set.
    pub fn arc_hits_removed(&self, segment: usize, s0: f64, s1: f64) -> bool {
        self.removed[segment]
            .iter()
            .any(|&(r0, r1)| r0 <= s1 + GEOM_TOL && r1 >= s0 - GEOM_TOL)
    }

    /// Whether the closed sub-arc `[s0, s1]` lies entirely in one removed arc.
    pub fn arc_inside_removed(&self, segment: usize, s0: f64, s1: f64) -> bool {
        self.removed[segment]
            .iter()
            .any(|&(r0, r1)| r0 <= s0 + GEOM_TOL && r1 >= s1 - GEOM_TOL)
    }

    pub fn contains_arc(&self, p: ArcPoint) -> bool {
        let at = self.complex.coords(p);
        !self
            .complex
            .incidences(at)
            .into_iter()
            .any(|ap| self.removed_at(ap))
    }

    pub fn contains(&self, p: Point) -> bool {
        let inc = self.complex.incidences(p);
        !inc.is_empty() && !inc.into_iter().any(|ap| self.removed_at(ap))
    }

    fn compute_boundary(&self) -> Vec<Point> {
        let step = 1e-6;
        let mut out: Vec<Point> = Vec::new();
        for (seg, list) in self.removed.iter().enumerate() {
            for &(s0, s1) in list {
                for s in [s0, s1] {
                    let p = self.complex.coords(ArcPoint { segment: seg, s });
                    let touches = self.complex.incidences(p).into_iter().any(|ap| {
                        let len = self.complex.lengths[ap.segment];
                        [ap.s - step, ap.s + step].into_iter().any(|t| {
                            (0.0..=len).contains(&t)
                                && self.contains_arc(ArcPoint {
                                    segment: ap.segment,
                                    s: t,
                                })
                        })
                    });
                    if touches && !out.iter().any(|q| dist(*q, p) <= GEOM_TOL) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        // open pieces of each segment, glued through vertices lying in G
        let nv = self.complex.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let vertex_in: Vec<bool> = self
            .complex
            .vertices
            .iter()
            .map(|v| self.contains(*v))
            .collect();
        let mut pieces = 0usize;
        for seg in 0..self.complex.segments.len() {
            let len = self.complex.lengths[seg];
            let [a, b] = self.complex.ends[seg];
            let mut cuts = vec![(f64::NEG_INFINITY, 0.0)];
            cuts.extend(self.removed[seg].iter().copied());
            cuts.push((len, f64::INFINITY));
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0].1, w[1].0);
                if hi - lo <= GEOM_TOL {
                    continue;
                }
                parent.push(parent.len());
                let id = parent.len() - 1;
                pieces += 1;
                if lo <= 0.0 && vertex_in[a] {
                    let (x, y) = (find(&mut parent, id), find(&mut parent, a));
                    parent[x] = y;
                }
                if hi >= len && vertex_in[b] {
                    let (x, y) = (find(&mut parent, id), find(&mut parent, b));
                    parent[x] = y;
                }
            }
        }
        if pieces == 0 {
            return Err(QhError::Configuration("region is empty".into()));
        }
        if self.boundary.is_empty() {
            return Err(QhError::Configuration(
                "region has empty boundary; it must be a proper subset".into(),
            ));
        }
        let members: Vec<usize> = (0..nv)
            .filter(|&v| vertex_in[v])
            .chain(nv..parent.len())
            .collect();
        let root = find(&mut parent, members[0]);
        if members.iter().any(|&m| find(&mut parent, m) != root) {
            return Err(QhError::Connectivity("region is not connected".into()));
        }
        Ok(())
    }

    /// δ_G from ambient (Euclidean) distance to the boundary.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.boundary
            .iter()
            .map(|b| dist(p, *b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(QhError::membership(p, "complex region"));
        }
        Ok(self.distance_to_boundary(p))
    }

    /// δ'_G: distance to the boundary in the length metric of `X`.
    pub fn length_boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(QhError::membership(p, "complex region"));
        }
        let ap = self.complex.locate(p).expect("member points are located");
        Ok(self.length_boundary_distance_arc(ap))
    }

    pub fn length_boundary_distance_arc(&self, p: ArcPoint) -> f64 {
        self.boundary
            .iter()
            .filter_map(|b| self.complex.locate(*b))
            .map(|b| self.complex.arc_distance(p, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Uniform sample from `G` with respect to arclength.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let ap = self.complex.sample(rng);
            if self.contains_arc(ap) {
                return self.complex.coords(ap);
            }
        }
    }
}

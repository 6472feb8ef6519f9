//! Boundary-graded nested lattice for planar domains.
//!
//! Level `l` is the square grid of spacing `h0 / 2^l` anchored at the
//! bounding-box corner. A location belongs to the mesh when it lies on the
//! grid of its own level, the coarsest level whose spacing is at most
//! `grading * delta`. Cells are visited recursively as in a quadtree.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::{dist, Rect};
use crate::spaces::PlaneDomain;
use crate::Point;

/// Primitive integer directions with sup-norm at most 3.
pub(crate) fn stencil() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            if (a, b) != (0, 0) && gcd(a.unsigned_abs(), b.unsigned_abs()) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reach of the stencil in units of the local spacing, `|(3, 2)|`.
pub(crate) const REACH: f64 = 3.6056;

const HALF_DIAGONAL: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    pub origin: Point,
    pub h0: f64,
    pub finest: u32,
    pub grading: f64,
    pub min_delta: f64,
    pub bbox: Rect,
}

impl Lattice {
    pub fn new(bbox: Rect, grading: f64, min_delta: f64) -> Self {
        let h0 = bbox.width().max(bbox.height());
        let mut finest = 0u32;
        while h0 / 2f64.powi(finest as i32) > grading * min_delta {
            finest += 1;
        }
        Lattice {
            origin: Point::new(bbox.x0, bbox.y0),
            h0,
            finest,
            grading,
            min_delta,
            bbox,
        }
    }

    pub fn spacing(&self, level: u32) -> f64 {
        self.h0 / 2f64.powi(level as i32)
    }

    fn unit(&self) -> f64 {
        self.spacing(self.finest)
    }

    /// Grid step of `level` in finest-grid units.
    pub fn step(&self, level: u32) -> i64 {
        1i64 << (self.finest - level)
    }

    /// Coarsest level whose spacing is at most `grading * delta`, clamped to
    /// the finest level.
    pub fn level_for(&self, delta: f64) -> u32 {
        let mut l = 0u32;
        while l < self.finest && self.spacing(l) > self.grading * delta {
            l += 1;
        }
        l
    }

    pub fn point(&self, i: i64, j: i64) -> Point {
        let u = self.unit();
        self.origin + Point::new(i as f64 * u, j as f64 * u)
    }

    pub fn key_near(&self, p: Point, step: i64) -> (f64, f64) {
        let u = self.unit() * step as f64;
        ((p.re - self.origin.re) / u, (p.im - self.origin.im) / u)
    }

    fn is_node(&self, domain: &PlaneDomain, i: i64, j: i64) -> Option<f64> {
        let p = self.point(i, j);
        if !self.bbox.contains(p) || !domain.contains(p) {
            return None;
        }
        let delta = domain.distance_to_boundary(p);
        if delta < self.min_delta {
            return None;
        }
        let step = self.step(self.level_for(delta));
        (i % step == 0 && j % step == 0).then_some(delta)
    }

    /// All mesh locations with their boundary distances, sorted by key.
    pub fn nodes(&self, domain: &PlaneDomain) -> Vec<((i64, i64), f64)> {
        let mut found: HashMap<(i64, i64), f64> = HashMap::new();
        let mut stack = vec![(0i64, 0i64, 0u32)];
        let last = 1i64 << self.finest;
        while let Some((ci, cj, level)) = stack.pop() {
            let s = self.step(level);
            for (i, j) in [(ci, cj), (ci + s, cj), (ci, cj + s), (ci + s, cj + s)] {
                if i > last || j > last || found.contains_key(&(i, j)) {
                    continue;
                }
                if let Some(d) = self.is_node(domain, i, j) {
                    found.insert((i, j), d);
                }
            }
            if level == self.finest {
                continue;
            }
            let size = self.spacing(level);
            let center = self.point(ci, cj) + Point::new(size / 2.0, size / 2.0);
            let cell = Rect::new(
                center.re - size / 2.0,
                center.im - size / 2.0,
                center.re + size / 2.0,
                center.im + size / 2.0,
            );
            if !cell.intersects(&self.bbox) {
                continue;
            }
            let dc = domain.distance_to_boundary(center);
            let radius = HALF_DIAGONAL * size;
            if !domain.contains(center) && dc > radius {
                continue;
            }
            if dc + radius < self.min_delta {
                continue;
            }
            if self.grading * (dc - radius) < size {
                let h = s / 2;
                for (di, dj) in [(0, 0), (h, 0), (0, h), (h, h)] {
                    stack.push((ci + di, cj + dj, level + 1));
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }

    /// Stencil edges between existing nodes whose segment stays in the domain.
    pub fn edges(
        &self,
        domain: &PlaneDomain,
        keys: &[(i64, i64)],
        delta: &[f64],
        index: &HashMap<(i64, i64), u32>,
    ) -> Vec<(u32, u32)> {
        let dirs = stencil();
        let mut edges: Vec<(u32, u32)> = keys
            .par_iter()
            .enumerate()
            .flat_map_iter(|(u, &(i, j))| {
                let step = self.step(self.level_for(delta[u]));
                let p = self.point(i, j);
                dirs.iter()
                    .filter_map(move |&(a, b)| {
                        let v = *index.get(&(i + a * step, j + b * step))?;
                        let q = self.point(i + a * step, j + b * step);
                        domain
                            .segment_inside(p, q)
                            .then_some(((u as u32).min(v), (u as u32).max(v)))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        edges.par_sort_unstable();
        edges.dedup();
        edges
    }

    /// Nodes a query point may attach to: all nodes on the grids of levels
    /// next to the point's own level within stencil reach.
    pub fn candidates(
        &self,
        p: Point,
        delta: f64,
        index: &HashMap<(i64, i64), u32>,
    ) -> Vec<(u32, Point)> {
        let own = self.level_for(delta);
        let lo = own.saturating_sub(1);
        let hi = (own + 1).min(self.finest);
        let mut out: Vec<(u32, Point)> = Vec::new();
        for level in lo..=hi {
            let step = self.step(level);
            let reach = REACH * self.spacing(level);
            let (x, y) = self.key_near(p, step);
            let r = REACH.ceil() as i64 + 1;
            let (bx, by) = (x.floor() as i64, y.floor() as i64);
            for a in bx - r..=bx + r {
                for b in by - r..=by + r {
                    let key = (a * step, b * step);
                    if let Some(&id) = index.get(&key) {
                        let q = self.point(key.0, key.1);
                        if dist(p, q) <= reach && !out.iter().any(|(n, _)| *n == id) {
                            out.push((id, q));
                        }
                    }
                }
            }
        }
        out.sort_unstable_by_key(|(n, _)| *n);
        out
    }
}

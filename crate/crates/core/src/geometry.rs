//! Small planar helpers shared by every module.

use crate::Point;
use serde::{Deserialize, Serialize};

/// Absolute tolerance for geometric predicates on coordinates.
pub const GEOM_TOL: f64 = 1e-9;

/// Shorthand constructor for a planar point.
#[inline]
pub fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    (a - b).norm()
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closest point of the segment `[a, b]` to `p`, as a parameter in `[0, 1]`.
pub fn project_onto_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return 0.0;
    }
    (dot(p - a, ab) / len2).clamp(0.0, 1.0)
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let s = project_onto_segment(p, a, b);
    dist(p, a + (b - a) * s)
}

/// Whether the closed segments `[p, q]` and `[a, b]` share a point.
pub fn segments_intersect(p: Point, q: Point, a: Point, b: Point) -> bool {
    let d1 = cross(q - p, a - p);
    let d2 = cross(q - p, b - p);
    let d3 = cross(b - a, p - a);
    let d4 = cross(b - a, q - a);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    point_segment_distance(a, p, q) <= GEOM_TOL
        || point_segment_distance(b, p, q) <= GEOM_TOL
        || point_segment_distance(p, a, b) <= GEOM_TOL
        || point_segment_distance(q, a, b) <= GEOM_TOL
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    /// Square of half-width `half` centred at `c`.
    pub fn centered(c: Point, half: f64) -> Self {
        Rect::new(c.re - half, c.im - half, c.re + half, c.im + half)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn is_valid(&self) -> bool {
        [self.x0, self.y0, self.x1, self.y1]
            .iter()
            .all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0
    }

    pub fn contains(&self, p: Point) -> bool {
        p.re >= self.x0 && p.re <= self.x1 && p.im >= self.y0 && p.im <= self.y1
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }

    /// The rectangle with each side pulled in by `margin`.
    pub fn shrink(&self, margin: f64) -> Rect {
        Rect::new(
            self.x0 + margin,
            self.y0 + margin,
            self.x1 - margin,
            self.y1 - margin,
        )
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// Lower-left corner plus fractions `(u, v)` of the extents.
    pub fn lerp(&self, u: f64, v: f64) -> Point {
        Point::new(self.x0 + u * self.width(), self.y0 + v * self.height())
    }
}

//! Seeded point sampling in regions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};
use crate::geometry::Rect;
use crate::spaces::Region;
use crate::Point;

/// Where planar samples are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Window {
    Rect(Rect),
    Annulus {
        center: Point,
        inner: f64,
        outer: f64,
    },
}

impl Window {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Window::Rect(r) => r.contains(p),
            Window::Annulus {
                center,
                inner,
                outer,
            } => {
                let r = (p - center).norm();
                r >= *inner && r <= *outer
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Window::Rect(r) => r.lerp(rng.random(), rng.random()),
            Window::Annulus {
                center,
                inner,
                outer,
            } => {
                let r2 = rng.random_range(inner * inner..=outer * outer);
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                center + Point::from_polar(r2.sqrt(), t)
            }
        }
    }
}

const MAX_TRIES: usize = 100_000;

/// A point of `G`, uniform over the window for planar regions and uniform in
/// arclength (filtered by the window) for complexes.
pub fn sample_point<R: Rng + ?Sized>(
    region: &Region,
    window: Option<&Window>,
    rng: &mut R,
) -> Result<Point> {
    for _ in 0..MAX_TRIES {
        let p = match (region, window) {
            (Region::Complex(cr), _) => cr.sample(rng),
            (Region::Plane(_), Some(w)) => w.draw(rng),
            (Region::Plane(d), None) => {
                return Err(QhError::Configuration(format!(
                    "sampling in the {} needs a window",
                    d.name()
                )))
            }
        };
        if region.contains(p) && window.is_none_or(|w| w.contains(p)) {
            return Ok(p);
        }
    }
    Err(QhError::Configuration(
        "sampling window does not meet the region".into(),
    ))
}

/// A point of `G` at distance at most `radius` from `z`, inside the
/// component of `B(z, radius) ∩ G` through `z` when `radius < δ_G(z)`.
pub fn sample_near<R: Rng + ?Sized>(
    region: &Region,
    z: Point,
    radius: f64,
    rng: &mut R,
) -> Result<Point> {
    for _ in 0..MAX_TRIES {
        let p = match region {
            Region::Plane(_) => {
                let r = radius * rng.random::<f64>().sqrt();
                z + Point::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
            }
            Region::Complex(cr) => {
                let x = cr.complex();
                let ap = x
                    .locate(z)
                    .ok_or_else(|| QhError::membership(z, "complex region"))?;
                let s = ap.s + rng.random_range(-radius..=radius);
                if s < 0.0 || s > x.segment_length(ap.segment) {
                    continue;
                }
                let (lo, hi) = (s.min(ap.s), s.max(ap.s));
                if cr.arc_hits_removed(ap.segment, lo, hi) {
                    continue;
                }
                x.segments()[ap.segment].at(s)
            }
        };
        if region.contains(p) && (p - z).norm() <= radius {
            return Ok(p);
        }
    }
    Err(QhError::Configuration(format!(
        "no point of the region found within {radius} of ({}, {})",
        z.re, z.im
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::PlaneDomain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn annulus_samples_stay_inside() {
        let g = Region::Plane(PlaneDomain::punctured_plane());
        let w = Window::Annulus {
            center: Point::new(0.0, 0.0),
            inner: 0.2,
            outer: 5.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let p = sample_point(&g, Some(&w), &mut rng).unwrap();
            assert!(p.norm() >= 0.2 && p.norm() <= 5.0);
        }
    }

    #[test]
    fn unbounded_plane_needs_window() {
        let g = Region::Plane(PlaneDomain::upper_half_plane());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_point(&g, None, &mut rng).is_err());
        let below = Window::Rect(Rect::new(-1.0, -2.0, 1.0, -1.0));
        assert!(sample_point(&g, Some(&below), &mut rng).is_err());
    }
}

//! Closed-form quasihyperbolic distances.

use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};
use crate::geometry::{dist, dot};
use crate::spaces::PlaneDomain;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactDomain {
    /// `{Im z > 0}`
    HalfPlane,
    /// `C \ {0}`
    PuncturedPlane,
}

/// `k_G(x, y)` for the upper half-plane or the plane punctured at 0.
pub fn qh_distance_exact(domain: ExactDomain, x: Point, y: Point) -> Result<f64> {
    match domain {
        ExactDomain::HalfPlane => {
            for p in [x, y] {
                if !(p.im > 0.0) {
                    return Err(QhError::membership(p, "upper half-plane"));
                }
            }
            Ok(half_plane(dist(x, y), x.im, y.im))
        }
        ExactDomain::PuncturedPlane => {
            for p in [x, y] {
                if p == Point::new(0.0, 0.0) || !p.norm().is_finite() {
                    return Err(QhError::membership(p, "punctured plane"));
                }
            }
            Ok(log_cylinder(x, y))
        }
    }
}

/// Same formulas for an arbitrary half-plane or puncture; `None` for
/// domains without a closed form.
pub fn plane_oracle(domain: &PlaneDomain, x: Point, y: Point) -> Option<Result<f64>> {
    let check = |p: Point| {
        if domain.contains(p) {
            Ok(())
        } else {
            Err(QhError::membership(p, domain.name()))
        }
    };
    match domain {
        PlaneDomain::HalfPlane { normal, offset } => Some(check(x).and(check(y)).map(|_| {
            let hx = dot(*normal, x) - offset;
            let hy = dot(*normal, y) - offset;
            half_plane(dist(x, y), hx, hy)
        })),
        PlaneDomain::Punctured { center } => Some(
            check(x)
                .and(check(y))
                .map(|_| log_cylinder(x - center, y - center)),
        ),
        _ => None,
    }
}

/// Hyperbolic distance in the form `2 asinh(|x-y| / (2 sqrt(hx hy)))`,
/// algebraically equal to `arccosh(1 + |x-y|^2 / (2 hx hy))`.
fn half_plane(d: f64, hx: f64, hy: f64) -> f64 {
    2.0 * (d / (2.0 * (hx * hy).sqrt())).asinh()
}

fn log_cylinder(x: Point, y: Point) -> f64 {
    let radial = (y.norm() / x.norm()).ln();
    let angle = (y / x).arg().abs();
    radial.hypot(angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn half_plane_values() {
        let k = qh_distance_exact(ExactDomain::HalfPlane, pt(0.0, 1.0), pt(0.0, 2.0)).unwrap();
        assert!((k - LN_2).abs() < 1e-15);
        let k = qh_distance_exact(ExactDomain::HalfPlane, pt(0.0, 1.0), pt(1.0, 1.0)).unwrap();
        assert!((k - 1.5f64.acosh()).abs() < 1e-15);
        assert!((k - 0.962424).abs() < 1e-6);
        assert!(qh_distance_exact(ExactDomain::HalfPlane, pt(0.0, 0.0), pt(1.0, 1.0)).is_err());
    }

    #[test]
    fn punctured_values() {
        let e = std::f64::consts::E;
        let p = ExactDomain::PuncturedPlane;
        assert!((qh_distance_exact(p, pt(1.0, 0.0), pt(e, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (qh_distance_exact(p, pt(1.0, 0.0), pt(0.0, 1.0)).unwrap() - PI / 2.0).abs() < 1e-15
        );
        assert!((qh_distance_exact(p, pt(1.0, 0.0), pt(-1.0, 0.0)).unwrap() - PI).abs() < 1e-15);
        assert_eq!(
            qh_distance_exact(p, pt(0.3, 0.2), pt(0.3, 0.2)).unwrap(),
            0.0
        );
        assert!(qh_distance_exact(p, pt(0.0, 0.0), pt(1.0, 0.0)).is_err());
    }

    #[test]
    fn general_half_plane_matches_rotation() {
        // {x > 1}: rotate the upper half-plane
        let g = PlaneDomain::half_plane(pt(1.0, 0.0), 1.0).unwrap();
        let k = plane_oracle(&g, pt(2.0, 0.0), pt(3.0, 0.0))
            .unwrap()
            .unwrap();
        assert!((k - LN_2).abs() < 1e-15);
        let d = PlaneDomain::disk(pt(0.0, 0.0), 1.0).unwrap();
        assert!(plane_oracle(&d, pt(0.1, 0.0), pt(0.2, 0.0)).is_none());
    }
}

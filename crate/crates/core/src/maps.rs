//! Homeomorphisms between planar domains with closed-form inverses.

use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};
use crate::spaces::{PlaneDomain, Region};
use crate::Point;

/// A homeomorphism `f: G -> G'` between planar domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    Identity {
        domain: PlaneDomain,
    },
    /// `(x, y) ↦ A (x, y) + shift`, with `A = [[m0, m1], [m2, m3]]`.
    Affine {
        matrix: [f64; 4],
        shift: Point,
        source: PlaneDomain,
    },
    /// `z ↦ z / |z|^2` on the punctured plane.
    Inversion,
    /// Piecewise shear of the upper half-plane: the identity for `x <= 0`,
    /// `x + i(x+1)y` for `x >= 0, y <= 1` and `x + i(x+y)` for `x >= 0, y > 1`.
    HalfPlaneShear,
    /// `maps[0]` is applied first.
    Composition {
        maps: Vec<MapSpec>,
    },
}

impl MapSpec {
    pub fn identity(domain: PlaneDomain) -> Self {
        MapSpec::Identity { domain }
    }

    pub fn affine(matrix: [f64; 4], shift: Point, source: PlaneDomain) -> Result<Self> {
        let f = MapSpec::Affine {
            matrix,
            shift,
            source,
        };
        f.image()?;
        Ok(f)
    }

    pub fn name(&self) -> String {
        match self {
            MapSpec::Identity { .. } => "identity".into(),
            MapSpec::Affine { .. } => "affine".into(),
            MapSpec::Inversion => "inversion".into(),
            MapSpec::HalfPlaneShear => "half-plane shear".into(),
            MapSpec::Composition { maps } => maps
                .iter()
                .rev()
                .map(|m| m.name())
                .collect::<Vec<_>>()
                .join(" ∘ "),
        }
    }

    /// The domain `G`.
    pub fn source(&self) -> PlaneDomain {
        match self {
            MapSpec::Identity { domain } => domain.clone(),
            MapSpec::Affine { source, .. } => source.clone(),
            MapSpec::Inversion => PlaneDomain::punctured_plane(),
            MapSpec::HalfPlaneShear => PlaneDomain::upper_half_plane(),
            MapSpec::Composition { maps } => maps
                .first()
                .map(|m| m.source())
                .unwrap_or_else(PlaneDomain::punctured_plane),
        }
    }

    /// The image domain `G' = f(G)`.
    pub fn image(&self) -> Result<PlaneDomain> {
        match self {
            MapSpec::Identity { domain } => Ok(domain.clone()),
            MapSpec::Affine {
                matrix,
                shift,
                source,
            } => source.affine_image(*matrix, *shift),
            MapSpec::Inversion => Ok(PlaneDomain::punctured_plane()),
            MapSpec::HalfPlaneShear => Ok(PlaneDomain::upper_half_plane()),
            MapSpec::Composition { maps } => match maps.last() {
                Some(m) => m.image(),
                None => Err(QhError::Composition("empty composition".into())),
            },
        }
    }

    pub fn source_region(&self) -> Region {
        Region::Plane(self.source())
    }

    pub fn image_region(&self) -> Result<Region> {
        self.image().map(Region::Plane)
    }

    /// Checks that consecutive factors of a composition fit together.
    pub fn validate(&self) -> Result<()> {
        if let MapSpec::Composition { maps } = self {
            if maps.is_empty() {
                return Err(QhError::Composition("empty composition".into()));
            }
            for m in maps {
                m.validate()?;
            }
            for pair in maps.windows(2) {
                let img = pair[0].image()?;
                if !img.approx_eq(&pair[1].source()) {
                    return Err(QhError::Composition(format!(
                        "image of {} ({}) differs from the domain of {} ({})",
                        pair[0].name(),
                        img.name(),
                        pair[1].name(),
                        pair[1].source().name()
                    )));
                }
            }
        }
        if let MapSpec::Affine { .. } = self {
            self.image()?;
        }
        Ok(())
    }

    /// `f(x)`.
    pub fn eval(&self, x: Point) -> Result<Point> {
        if !self.source().contains(x) {
            return Err(QhError::membership(x, format!("domain of {}", self.name())));
        }
        Ok(self.apply(x))
    }

    /// `f^{-1}(y)`.
    pub fn invert(&self, y: Point) -> Result<Point> {
        let image = self.image()?;
        if !image.contains(y) {
            return Err(QhError::membership(y, format!("image of {}", self.name())));
        }
        Ok(self.apply_inverse(y))
    }

    fn apply(&self, z: Point) -> Point {
        match self {
            MapSpec::Identity { .. } => z,
            MapSpec::Affine { matrix, shift, .. } => {
                let [a, b, c, d] = *matrix;
                Point::new(a * z.re + b * z.im, c * z.re + d * z.im) + shift
            }
            MapSpec::Inversion => z / z.norm_sqr(),
            MapSpec::HalfPlaneShear => {
                let (x, y) = (z.re, z.im);
                if x <= 0.0 {
                    z
                } else if y <= 1.0 {
                    Point::new(x, (x + 1.0) * y)
                } else {
                    Point::new(x, x + y)
                }
            }
            MapSpec::Composition { maps } => maps.iter().fold(z, |p, m| m.apply(p)),
        }
    }

    fn apply_inverse(&self, w: Point) -> Point {
        match self {
            MapSpec::Identity { .. } => w,
            MapSpec::Affine { matrix, shift, .. } => {
                let [a, b, c, d] = *matrix;
                let det = a * d - b * c;
                let p = w - shift;
                Point::new((d * p.re - b * p.im) / det, (-c * p.re + a * p.im) / det)
            }
            MapSpec::Inversion => w / w.norm_sqr(),
            MapSpec::HalfPlaneShear => {
                let (u, v) = (w.re, w.im);
                if u <= 0.0 {
                    w
                } else if v <= u + 1.0 {
                    Point::new(u, v / (u + 1.0))
                } else {
                    Point::new(u, v - u)
                }
            }
            MapSpec::Composition { maps } => maps.iter().rev().fold(w, |p, m| m.apply_inverse(p)),
        }
    }

    /// `f` evaluated element-wise; the first point outside the domain aborts
    /// with its index.
    pub fn pushforward_points(&self, pts: &[Point]) -> Result<Vec<Point>> {
        pts.iter()
            .enumerate()
            .map(|(i, p)| self.eval(*p).map_err(|e| QhError::at_index(i, e)))
            .collect()
    }
}

/// `g ∘ f`; the image of `f` must be the domain of `g`.
pub fn compose(g: &MapSpec, f: &MapSpec) -> Result<MapSpec> {
    let mut maps = Vec::new();
    for m in [f, g] {
        match m {
            MapSpec::Composition { maps: inner } => maps.extend(inner.iter().cloned()),
            other => maps.push(other.clone()),
        }
    }
    let h = MapSpec::Composition { maps };
    h.validate()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    fn close(a: Point, b: Point) -> bool {
        (a - b).norm() <= 1e-12
    }

    #[test]
    fn inversion_values() {
        let f = MapSpec::Inversion;
        assert!(close(f.eval(pt(1.0, 1.0)).unwrap(), pt(0.5, 0.5)));
        assert!(close(f.invert(pt(0.5, 0.5)).unwrap(), pt(1.0, 1.0)));
        assert!(f.eval(pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn shear_branches() {
        let f = MapSpec::HalfPlaneShear;
        assert_eq!(f.eval(pt(1.0, 0.5)).unwrap(), pt(1.0, 1.0));
        assert_eq!(f.eval(pt(1.0, 2.0)).unwrap(), pt(1.0, 3.0));
        assert_eq!(f.eval(pt(-1.0, 3.0)).unwrap(), pt(-1.0, 3.0));
        assert_eq!(f.invert(pt(1.0, 1.0)).unwrap(), pt(1.0, 0.5));
        assert_eq!(f.invert(pt(1.0, 3.0)).unwrap(), pt(1.0, 2.0));
        assert!(f.eval(pt(1.0, 0.0)).is_err());
        assert!(f.invert(pt(1.0, -1.0)).is_err());
    }

    #[test]
    fn shear_seams_are_continuous() {
        let f = MapSpec::HalfPlaneShear;
        for y in [0.1, 0.5, 1.0, 2.5] {
            let left = f.eval(pt(-1e-300, y)).unwrap();
            let right = f.eval(pt(1e-300, y)).unwrap();
            assert!((left - right).norm() <= 1e-299 * 3.0);
        }
        for x in [0.5, 3.0] {
            let below = f.eval(pt(x, 1.0)).unwrap();
            let above = f.eval(pt(x, 1.0 + 1e-15)).unwrap();
            assert!((below - above).norm() <= 1e-14);
        }
    }

    #[test]
    fn compositions() {
        let inv = MapSpec::Inversion;
        let twice = compose(&inv, &inv).unwrap();
        assert!(close(twice.eval(pt(0.3, -2.0)).unwrap(), pt(0.3, -2.0)));
        let shear = MapSpec::HalfPlaneShear;
        assert!(matches!(
            compose(&inv, &shear),
            Err(QhError::Composition(_))
        ));
        let id = MapSpec::identity(PlaneDomain::upper_half_plane());
        let h = compose(&id, &shear).unwrap();
        assert_eq!(
            h.eval(pt(2.0, 0.25)).unwrap(),
            shear.eval(pt(2.0, 0.25)).unwrap()
        );
        let shift = MapSpec::affine(
            [1.0, 0.0, 0.0, 1.0],
            pt(1.0, 0.0),
            PlaneDomain::upper_half_plane(),
        )
        .unwrap();
        let h = compose(&shear, &shift).unwrap();
        let p = pt(-0.5, 1.5);
        assert!(close(h.invert(h.eval(p).unwrap()).unwrap(), p));
        assert_eq!(h.name(), "half-plane shear ∘ affine");
    }

    #[test]
    fn pushforward_reports_index() {
        let f = MapSpec::Inversion;
        assert!(f.pushforward_points(&[]).unwrap().is_empty());
        let out = f
            .pushforward_points(&[pt(1.0, 0.0), pt(2.0, 0.0), pt(1.0, 1.0)])
            .unwrap();
        assert!(close(out[1], pt(0.5, 0.0)) && close(out[2], pt(0.5, 0.5)));
        match f.pushforward_points(&[pt(1.0, 0.0), pt(0.0, 0.0)]) {
            Err(QhError::AtIndex { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn affine_stretch_image() {
        let f = MapSpec::affine(
            [2.0, 0.0, 0.0, 1.0],
            pt(0.0, 0.0),
            PlaneDomain::upper_half_plane(),
        )
        .unwrap();
        assert!(f
            .image()
            .unwrap()
            .approx_eq(&PlaneDomain::upper_half_plane()));
        assert_eq!(f.eval(pt(1.0, 1.0)).unwrap(), pt(2.0, 1.0));
        assert_eq!(f.invert(pt(2.0, 1.0)).unwrap(), pt(1.0, 1.0));
    }
}

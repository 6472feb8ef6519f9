//! Ring distortion of sampled balls.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::{argmax, Property, PropertyReport, SampleSpec, Witness, WitnessKind};
use crate::error::{QhError, Result};
use crate::maps::MapSpec;
use crate::sampling::sample_point;
use crate::Point;

/// Points per sampled circle.
pub const RING_POINTS: usize = 256;

fn image_circle(f: &MapSpec, z: Point, r: f64) -> Result<Vec<Point>> {
    (0..RING_POINTS)
        .map(|j| f.eval(z + Point::from_polar(r, TAU * j as f64 / RING_POINTS as f64)))
        .collect()
}

/// `diam f(B̄) / dist(f(B̄), ∂f(αB))` for `B = B(z, r)`, evaluated on the
/// images of the two bounding circles. Requires `αr < δ_G(z)`, so both
/// balls are disks inside `G`.
pub fn ring_ratio(f: &MapSpec, z: Point, r: f64, alpha: f64) -> Result<f64> {
    let inner = image_circle(f, z, r)?;
    let outer = image_circle(f, z, alpha * r)?;
    let mut diam = 0.0_f64;
    let mut gap = f64::INFINITY;
    for (i, p) in inner.iter().enumerate() {
        for q in &inner[i + 1..] {
            diam = diam.max((p - q).norm());
        }
        for q in &outer {
            gap = gap.min((p - q).norm());
        }
    }
    Ok(diam / gap)
}

/// Largest ring ratio over balls `B(z, r)` with `βr < δ_G(z)`. Balls with
/// radius below `spec.min_radius` are skipped and counted.
pub fn estimate_ring(
    f: &MapSpec,
    spec: &SampleSpec,
    alpha: f64,
    beta: f64,
) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    if !(alpha > 1.0 && alpha <= beta) {
        return Err(QhError::Configuration(format!(
            "need 1 < alpha <= beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let g = f.source_region();
    let mut rng = spec.rng();
    let mut balls = Vec::with_capacity(spec.count);
    let mut skipped = 0;
    for _ in 0..spec.count {
        let z = sample_point(&g, spec.window.as_ref(), &mut rng)?;
        let u: f64 = rng.random();
        let r = u * g.boundary_distance(z)? / beta;
        if r < spec.min_radius {
            skipped += 1;
        } else {
            balls.push((z, r));
        }
    }
    let ratios = balls
        .par_iter()
        .map(|&(z, r)| ring_ratio(f, z, r, alpha))
        .collect::<Result<Vec<_>>>()?;
    let (k, m) = argmax(ratios.iter().copied()).ok_or_else(|| {
        QhError::Resolution(format!(
            "all {skipped} sampled balls were below the minimum radius"
        ))
    })?;
    let mut params = BTreeMap::new();
    params.insert("alpha".into(), alpha);
    params.insert("beta".into(), beta);
    Ok(PropertyReport {
        property: Property::Ring,
        map: f.name(),
        estimate: m,
        columns: ["radius".into(), "ratio".into()],
        table: balls.iter().zip(&ratios).map(|(b, v)| [b.1, *v]).collect(),
        params,
        witness: Some(Witness {
            kind: WitnessKind::Ball {
                radius: balls[k].1,
                alpha,
            },
            points: vec![balls[k].0],
            ratio: m,
            label: "largest ring ratio".into(),
        }),
        samples_used: balls.len(),
        skipped,
        seed: spec.seed,
        count: spec.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::sampling::Window;
    use crate::spaces::PlaneDomain;

    #[test]
    fn identity_ring_is_one() {
        let f = MapSpec::identity(PlaneDomain::upper_half_plane());
        let spec = SampleSpec::new(4, 20).with_window(Window::Rect(Rect::new(-1.0, 0.5, 1.0, 2.0)));
        let rep = estimate_ring(&f, &spec, 3.0, 12.0).unwrap();
        assert!((rep.estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_balls_are_skipped() {
        let f = MapSpec::identity(PlaneDomain::upper_half_plane());
        let mut spec =
            SampleSpec::new(4, 20).with_window(Window::Rect(Rect::new(-1.0, 0.5, 1.0, 2.0)));
        spec.min_radius = 10.0;
        let err = estimate_ring(&f, &spec, 3.0, 12.0).unwrap_err();
        assert!(matches!(err, QhError::Resolution(_)));
        spec.min_radius = 0.02;
        let rep = estimate_ring(&f, &spec, 3.0, 12.0).unwrap();
        assert!(rep.skipped > 0 && rep.samples_used + rep.skipped == 20);
    }

    #[test]
    fn bad_alpha_rejected() {
        let f = MapSpec::Inversion;
        let spec = SampleSpec::new(4, 2);
        assert!(estimate_ring(&f, &spec, 1.0, 3.0).is_err());
        assert!(estimate_ring(&f, &spec, 4.0, 3.0).is_err());
    }
}

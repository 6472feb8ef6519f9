//! Binned envelope of the relative distortion.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::{argmax, Property, PropertyReport, SampleSpec, Witness, WitnessKind};
use crate::error::{QhError, Result};
use crate::maps::MapSpec;
use crate::sampling::sample_point;
use crate::Point;

/// `|f(x) - f(y)| / δ_G'(f(x))`.
pub fn relative_ratio(f: &MapSpec, x: Point, y: Point) -> Result<f64> {
    let fx = f.eval(x)?;
    let fy = f.eval(y)?;
    Ok((fx - fy).norm() / f.image_region()?.boundary_distance(fx)?)
}

/// Samples pairs with `|x - y| < t0 δ_G(x)` and reports, per bin of
/// `t = |x - y| / δ_G(x)`, the largest `t` seen and the running maximum of
/// the relative ratio.
pub fn estimate_relative(f: &MapSpec, spec: &SampleSpec, t0: f64) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    if !(t0 > 0.0 && t0 <= 1.0) {
        return Err(QhError::Configuration(format!(
            "t0 must lie in (0, 1], got {t0}"
        )));
    }
    let g = f.source_region();
    let mut rng = spec.rng();
    let mut pairs = Vec::with_capacity(spec.count);
    while pairs.len() < spec.count {
        let x = sample_point(&g, spec.window.as_ref(), &mut rng)?;
        let d = g.boundary_distance(x)?;
        let u: f64 = rng.random();
        let y = x + Point::from_polar(u * t0 * d, rng.random_range(0.0..TAU));
        if y == x || !g.contains(y) {
            continue;
        }
        let t = (x - y).norm() / d;
        if t >= t0 {
            continue;
        }
        pairs.push((x, y, t));
    }
    let ratios = pairs
        .par_iter()
        .map(|&(x, y, _)| relative_ratio(f, x, y))
        .collect::<Result<Vec<_>>>()?;

    let bins = spec.bins;
    let mut tmax = vec![f64::NAN; bins];
    let mut rmax = vec![f64::NAN; bins];
    for (&(_, _, t), &r) in pairs.iter().zip(&ratios) {
        let b = ((t / t0 * bins as f64) as usize).min(bins - 1);
        if !(tmax[b] >= t) {
            tmax[b] = t;
        }
        if !(rmax[b] >= r) {
            rmax[b] = r;
        }
    }
    let mut table = Vec::new();
    let mut running = 0.0_f64;
    for b in 0..bins {
        if tmax[b].is_nan() {
            continue;
        }
        running = running.max(rmax[b]);
        table.push([tmax[b], running]);
    }
    let (k, worst) = argmax(ratios.iter().copied())
        .ok_or_else(|| QhError::Resolution("no pair was evaluated".into()))?;
    let mut params = BTreeMap::new();
    params.insert("t0".into(), t0);
    Ok(PropertyReport {
        property: Property::Relative,
        map: f.name(),
        estimate: running,
        columns: ["t".into(), "theta".into()],
        table,
        params,
        witness: Some(Witness {
            kind: WitnessKind::RelativePair,
            points: vec![pairs[k].0, pairs[k].1],
            ratio: worst,
            label: "largest relative ratio".into(),
        }),
        samples_used: pairs.len(),
        skipped: 0,
        seed: spec.seed,
        count: spec.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pt, Rect};
    use crate::sampling::Window;
    use crate::spaces::PlaneDomain;

    #[test]
    fn identity_table_is_the_diagonal() {
        let f = MapSpec::identity(PlaneDomain::upper_half_plane());
        let spec =
            SampleSpec::new(2, 300).with_window(Window::Rect(Rect::new(-1.0, 0.2, 1.0, 2.0)));
        let rep = estimate_relative(&f, &spec, 0.5).unwrap();
        assert!(!rep.table.is_empty());
        for [t, th] in &rep.table {
            assert_eq!(t, th);
        }
        assert!(rep.table.windows(2).all(|w| w[0][1] <= w[1][1]));
    }

    #[test]
    fn rejects_bad_t0() {
        let f = MapSpec::Inversion;
        let spec = SampleSpec::new(2, 3).with_window(Window::Annulus {
            center: pt(0.0, 0.0),
            inner: 0.5,
            outer: 2.0,
        });
        assert!(estimate_relative(&f, &spec, 0.0).is_err());
        assert!(estimate_relative(&f, &spec, 1.5).is_err());
    }
}

//! Quasiconformality and (local) weak quasisymmetry.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{argmax, Property, PropertyReport, SampleSpec, Witness, WitnessKind, DIRECTIONS};
use crate::error::{QhError, Result};
use crate::geometry::pt;
use crate::maps::MapSpec;
use crate::sampling::{sample_near, sample_point};
use crate::Point;

fn circle(x: Point, r: f64) -> impl Iterator<Item = Point> {
    (0..DIRECTIONS).map(move |j| x + Point::from_polar(r, TAU * j as f64 / DIRECTIONS as f64))
}

/// `L_f(x, r) / l_f(x, r)` over equispaced directions. Each image radius is
/// divided by the actual distance of its sample point from `x`, so rounding
/// in the sampled circle does not leak into the ratio.
pub fn circle_distortion(f: &MapSpec, x: Point, r: f64) -> Result<f64> {
    let fx = f.eval(x)?;
    let mut hi = 0.0_f64;
    let mut lo = f64::INFINITY;
    for y in circle(x, r) {
        let q = (f.eval(y)? - fx).norm() / (y - x).norm();
        hi = hi.max(q);
        lo = lo.min(q);
    }
    Ok(hi / lo)
}

/// `|f(x) - f(a)| / |f(x) - f(b)|`.
pub fn triple_ratio(f: &MapSpec, x: Point, a: Point, b: Point) -> Result<f64> {
    let fx = f.eval(x)?;
    Ok((fx - f.eval(a)?).norm() / (fx - f.eval(b)?).norm())
}

/// Best admissible triple `(x, a, b)` with `a`, `b` on the sampled circle.
fn circle_triple(f: &MapSpec, x: Point, r: f64) -> Result<(f64, Point, Point)> {
    let fx = f.eval(x)?;
    let pts: Vec<Point> = circle(x, r).collect();
    let d: Vec<f64> = pts.iter().map(|p| (p - x).norm()).collect();
    let e = pts
        .iter()
        .map(|p| f.eval(*p).map(|w| (w - fx).norm()))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (f64::NEG_INFINITY, pts[0], pts[0]);
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if d[i] <= d[j] && e[i] / e[j] > best.0 {
                best = (e[i] / e[j], pts[i], pts[j]);
            }
        }
    }
    Ok(best)
}

fn base_report(property: Property, f: &MapSpec, spec: &SampleSpec) -> PropertyReport {
    PropertyReport {
        property,
        map: f.name(),
        estimate: 1.0,
        columns: ["radius".into(), "H".into()],
        table: Vec::new(),
        params: BTreeMap::new(),
        witness: None,
        samples_used: 0,
        skipped: 0,
        seed: spec.seed,
        count: spec.count,
    }
}

/// Envelope of `L_f / l_f` per radius of the schedule. Radii at or beyond
/// `δ_G(x)` are skipped and counted.
pub fn estimate_qc(f: &MapSpec, spec: &SampleSpec) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    let g = f.source_region();
    let mut rng = spec.rng();
    let bases = (0..spec.count)
        .map(|_| sample_point(&g, spec.window.as_ref(), &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let deltas = bases
        .iter()
        .map(|x| g.boundary_distance(*x))
        .collect::<Result<Vec<_>>>()?;

    let mut report = base_report(Property::Quasiconformal, f, spec);
    let mut skipped = 0;
    let mut used = 0;
    for &r in &spec.radius_schedule {
        let idx: Vec<usize> = (0..bases.len()).filter(|&i| r < deltas[i]).collect();
        skipped += bases.len() - idx.len();
        let ratios = idx
            .par_iter()
            .map(|&i| circle_distortion(f, bases[i], r))
            .collect::<Result<Vec<_>>>()?;
        let Some((k, h)) = argmax(ratios.iter().copied()) else {
            continue;
        };
        used += ratios.len();
        report.table.push([r, h]);
        report.estimate = h;
        report.witness = Some(Witness {
            kind: WitnessKind::Circle { radius: r },
            points: vec![bases[idx[k]]],
            ratio: h,
            label: format!("largest distortion at radius {r}"),
        });
    }
    if report.witness.is_none() {
        return Err(QhError::Resolution(
            "every radius of the schedule reaches the boundary".into(),
        ));
    }
    report.samples_used = used;
    report.skipped = skipped;
    Ok(report)
}

enum Item {
    Triple(Point, Point, Point, &'static str),
    Circle(Point, f64),
}

fn evaluate(f: &MapSpec, items: Vec<Item>, mut report: PropertyReport) -> Result<PropertyReport> {
    let evaluated = items
        .par_iter()
        .map(|it| match it {
            Item::Triple(x, a, b, label) => {
                triple_ratio(f, *x, *a, *b).map(|v| (v, [*x, *a, *b], *label))
            }
            Item::Circle(x, r) => {
                circle_triple(f, *x, *r).map(|(v, a, b)| (v, [*x, a, b], "circle triple"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (k, h) = argmax(evaluated.iter().map(|e| e.0))
        .ok_or_else(|| QhError::Resolution("no admissible triple was evaluated".into()))?;
    let (_, points, label) = evaluated[k];
    report.estimate = h.max(1.0);
    report.samples_used = evaluated.len();
    report.witness = Some(Witness {
        kind: WitnessKind::Triple,
        points: points.to_vec(),
        ratio: h,
        label: label.into(),
    });
    Ok(report)
}

fn ordered(x: Point, a: Point, b: Point) -> (Point, Point) {
    if (x - a).norm() <= (x - b).norm() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Largest `|f(x)-f(a)| / |f(x)-f(b)|` over sampled triples with
/// `|x - a| <= |x - b|`, floored at 1.
pub fn estimate_weak_qs(f: &MapSpec, spec: &SampleSpec) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    let g = f.source_region();
    let w = spec.window.as_ref();
    let mut rng = spec.rng();
    let mut items = Vec::with_capacity(2 * spec.count);
    for _ in 0..spec.count {
        let x = sample_point(&g, w, &mut rng)?;
        let a = sample_point(&g, w, &mut rng)?;
        let mut b = sample_point(&g, w, &mut rng)?;
        while b == x {
            b = sample_point(&g, w, &mut rng)?;
        }
        let (a, b) = ordered(x, a, b);
        items.push(Item::Triple(x, a, b, "sampled triple"));
        items.push(Item::Circle(x, 0.5 * g.boundary_distance(x)?));
    }
    if matches!(f, MapSpec::Inversion) {
        for &t in &spec.witness_t {
            items.push(Item::Triple(
                pt(1.0, 0.0),
                pt(1.0 / t, 0.0),
                pt(t, 0.0),
                "inversion family",
            ));
        }
    }
    let mut report = base_report(Property::WeakQuasisymmetric, f, spec);
    report.columns = ["sample".into(), "ratio".into()];
    evaluate(f, items, report)
}

/// The shear family at column `n`: base `O = (n, 1/2)` with `a`, `b` at
/// distance `qε/2` straight up and straight left.
pub fn shear_witness(n: f64, q: f64, eps: f64) -> [Point; 3] {
    let s = 0.5 * q * eps;
    [pt(n, 0.5), pt(n, 0.5 + s), pt(n - s, 0.5)]
}

/// Weak quasisymmetry restricted to triples inside `B(z, q δ_G(z))`.
pub fn estimate_local_weak_qs(f: &MapSpec, spec: &SampleSpec) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    let g = f.source_region();
    let q = spec.locality_q;
    let mut rng = spec.rng();
    let mut items = Vec::with_capacity(2 * spec.count);
    for _ in 0..spec.count {
        let z = sample_point(&g, spec.window.as_ref(), &mut rng)?;
        let rho = q * g.boundary_distance(z)?;
        let x = sample_near(&g, z, rho, &mut rng)?;
        let a = sample_near(&g, z, rho, &mut rng)?;
        let mut b = sample_near(&g, z, rho, &mut rng)?;
        while b == x {
            b = sample_near(&g, z, rho, &mut rng)?;
        }
        let (a, b) = ordered(x, a, b);
        items.push(Item::Triple(x, a, b, "sampled triple"));
        items.push(Item::Circle(z, 0.5 * rho));
    }
    if matches!(f, MapSpec::HalfPlaneShear) {
        for &n in &spec.witness_n {
            let [o, a, b] = shear_witness(n, q, spec.witness_eps);
            items.push(Item::Triple(o, a, b, "shear family"));
        }
    }
    let mut report = base_report(Property::LocalWeakQuasisymmetric, f, spec);
    report.columns = ["sample".into(), "ratio".into()];
    report.params.insert("q".into(), q);
    evaluate(f, items, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::sampling::Window;
    use crate::spaces::PlaneDomain;

    fn window() -> Window {
        Window::Rect(Rect::new(-1.0, 0.5, 1.0, 2.0))
    }

    #[test]
    fn identity_is_undistorted() {
        let f = MapSpec::identity(PlaneDomain::upper_half_plane());
        let spec = SampleSpec::new(3, 50).with_window(window());
        assert_eq!(estimate_qc(&f, &spec).unwrap().estimate, 1.0);
        assert_eq!(estimate_weak_qs(&f, &spec).unwrap().estimate, 1.0);
        assert_eq!(estimate_local_weak_qs(&f, &spec).unwrap().estimate, 1.0);
    }

    #[test]
    fn stretch_reaches_two() {
        let f = MapSpec::affine(
            [2.0, 0.0, 0.0, 1.0],
            pt(0.0, 0.0),
            PlaneDomain::upper_half_plane(),
        )
        .unwrap();
        let spec = SampleSpec::new(5, 20).with_window(window());
        let qc = estimate_qc(&f, &spec).unwrap();
        assert!((qc.estimate - 2.0).abs() < 1e-9, "{}", qc.estimate);
        for q in [0.1, 0.5, 0.9] {
            let mut s = spec.clone();
            s.locality_q = q;
            let h = estimate_local_weak_qs(&f, &s).unwrap().estimate;
            assert!((h - 2.0).abs() < 1e-9, "{h}");
        }
    }

    #[test]
    fn inversion_family_ratios() {
        for t in [2.0, 10.0, 100.0] {
            let r = triple_ratio(
                &MapSpec::Inversion,
                pt(1.0, 0.0),
                pt(1.0 / t, 0.0),
                pt(t, 0.0),
            )
            .unwrap();
            assert!((r - t).abs() <= 1e-12 * t);
        }
    }

    #[test]
    fn shear_family_ratios() {
        for n in [1.0, 10.0, 100.0] {
            let [o, a, b] = shear_witness(n, 0.5, 0.25);
            assert!((o - a).norm() <= (o - b).norm());
            let r = triple_ratio(&MapSpec::HalfPlaneShear, o, a, b).unwrap();
            let want = 2.0 * 5f64.sqrt() / 5.0 * (n + 1.0);
            assert!((r - want).abs() <= 1e-12 * want, "{r} vs {want}");
        }
    }

    #[test]
    fn inversion_distortion_shrinks_with_radius() {
        let spec = SampleSpec::new(9, 10).with_window(Window::Annulus {
            center: pt(0.0, 0.0),
            inner: 0.5,
            outer: 2.0,
        });
        let rep = estimate_qc(&MapSpec::Inversion, &spec).unwrap();
        let h: Vec<f64> = rep.table.iter().map(|r| r[1]).collect();
        assert!(h.windows(2).all(|w| w[1] <= w[0]));
        assert!(h.last().unwrap() - 1.0 < 1e-2);
    }

    #[test]
    fn qc_skips_large_radii() {
        let f = MapSpec::identity(PlaneDomain::upper_half_plane());
        let mut spec =
            SampleSpec::new(1, 10).with_window(Window::Rect(Rect::new(0.0, 0.05, 1.0, 0.09)));
        spec.radius_schedule = vec![1.0, 0.01];
        let rep = estimate_qc(&f, &spec).unwrap();
        assert_eq!(rep.skipped, 10);
        assert_eq!(rep.table.len(), 1);
        spec.radius_schedule = vec![1.0];
        assert!(estimate_qc(&f, &spec).is_err());
    }
}

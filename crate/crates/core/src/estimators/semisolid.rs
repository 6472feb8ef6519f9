//! Envelope fit of the quasihyperbolic distortion.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{argmax, Property, PropertyReport, SampleSpec, Witness, WitnessKind};
use crate::error::{QhError, Result};
use crate::maps::MapSpec;
use crate::qhgraph::QhMesh;
use crate::sampling::sample_point;
use crate::spaces::Region;

/// Candidate exponents `0.05, 0.10, ..., 1.0`.
pub const ALPHA_GRID: [f64; 20] = {
    let mut g = [0.0; 20];
    let mut k = 0;
    while k < 20 {
        g[k] = (k + 1) as f64 / 20.0;
        k += 1;
    }
    g
};

fn same_region(a: &Region, b: &Region) -> bool {
    match (a.as_plane(), b.as_plane()) {
        (Some(p), Some(q)) => p.approx_eq(q),
        _ => false,
    }
}

/// Scatter of `(k_G(x, y), k_G'(f x, f y))` over sampled pairs, with the
/// best linear slope as the estimate and the `μ max{t^α, t}` envelope fit
/// stored as `params.mu` and `params.alpha`.
pub fn estimate_semisolid(
    f: &MapSpec,
    mesh_src: &QhMesh,
    mesh_img: &QhMesh,
    spec: &SampleSpec,
) -> Result<PropertyReport> {
    spec.validate()?;
    f.validate()?;
    let g = f.source_region();
    if !same_region(mesh_src.region(), &g) {
        return Err(QhError::Configuration(
            "source mesh is not built on the domain of the map".into(),
        ));
    }
    if !same_region(mesh_img.region(), &f.image_region()?) {
        return Err(QhError::Configuration(
            "image mesh is not built on the image of the map".into(),
        ));
    }
    let w = spec.window.as_ref();
    let mut rng = spec.rng();
    let mut pairs = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let x = sample_point(&g, w, &mut rng)?;
        let mut y = sample_point(&g, w, &mut rng)?;
        while y == x {
            y = sample_point(&g, w, &mut rng)?;
        }
        pairs.push((x, y));
    }
    let scatter = pairs
        .par_iter()
        .map(|&(x, y)| -> Result<(f64, f64)> {
            let t = mesh_src.distance(x, y)?.distance;
            let s = mesh_img.distance(f.eval(x)?, f.eval(y)?)?.distance;
            Ok((t, s))
        })
        .collect::<Result<Vec<_>>>()?;

    let kept: Vec<usize> = (0..scatter.len()).filter(|&i| scatter[i].0 > 0.0).collect();
    let (k, slope) = argmax(kept.iter().map(|&i| scatter[i].1 / scatter[i].0))
        .ok_or_else(|| QhError::Resolution("every sampled pair collapsed to one node".into()))?;
    let table: Vec<[f64; 2]> = ALPHA_GRID
        .iter()
        .map(|&a| {
            let mu = kept
                .iter()
                .map(|&i| {
                    let (t, s) = scatter[i];
                    s / t.powf(a).max(t)
                })
                .fold(0.0, f64::max);
            [a, mu]
        })
        .collect();
    let best = table
        .iter()
        .fold(table[0], |b, row| if row[1] < b[1] { *row } else { b });

    let (x, y) = pairs[kept[k]];
    let mut params = BTreeMap::new();
    params.insert("mu".into(), best[1]);
    params.insert("alpha".into(), best[0]);
    params.insert("grading_src".into(), mesh_src.params().grading);
    params.insert("grading_img".into(), mesh_img.params().grading);
    Ok(PropertyReport {
        property: Property::Semisolid,
        map: f.name(),
        estimate: slope,
        columns: ["alpha".into(), "mu".into()],
        table,
        params,
        witness: Some(Witness {
            kind: WitnessKind::QhPair,
            points: vec![x, y],
            ratio: slope,
            label: "steepest pair".into(),
        }),
        samples_used: kept.len(),
        skipped: scatter.len() - kept.len(),
        seed: spec.seed,
        count: spec.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_grid_ends() {
        assert_eq!(ALPHA_GRID[0], 0.05);
        assert_eq!(ALPHA_GRID[19], 1.0);
        assert!(ALPHA_GRID.windows(2).all(|w| w[0] < w[1]));
    }
}

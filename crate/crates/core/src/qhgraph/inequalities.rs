//! Inequality suites comparing mesh distances with Euclidean quantities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{plane_oracle, MetricKind, QhMesh};
use crate::error::{QhError, Result};
use crate::geometry::dist;
use crate::sampling::{sample_near, sample_point, Window};
use crate::spaces::Region;
use crate::Point;

/// Seeded pair sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub seed: u64,
    pub count: usize,
    #[serde(default)]
    pub window: Option<Window>,
}

/// One inequality evaluated at one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRow {
    /// `<pair index>:<clause>`
    pub id: String,
    pub x: Point,
    pub y: Point,
    pub value: f64,
    pub oracle: Option<f64>,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub suite: String,
    pub tolerance: f64,
    pub pairs: usize,
    pub rows: Vec<InequalityRow>,
}

impl InequalityReport {
    pub fn violations(&self) -> Vec<&InequalityRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, Copy)]
enum PairKind {
    Generic,
    Ball { z: Point, t: f64 },
    Near,
}

#[derive(Debug, Clone, Copy)]
struct Pair {
    x: Point,
    y: Point,
    kind: PairKind,
}

fn draw_pairs(region: &Region, spec: &PairSpec, c: f64, with_balls: bool) -> Result<Vec<Pair>> {
    if spec.count == 0 {
        return Err(QhError::Configuration(
            "pair count must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let w = spec.window.as_ref();
    let modulus = if with_balls { 3 } else { 2 };
    (0..spec.count)
        .map(|i| match i % modulus {
            0 => Ok(Pair {
                x: sample_point(region, w, &mut rng)?,
                y: sample_point(region, w, &mut rng)?,
                kind: PairKind::Generic,
            }),
            1 => {
                let x = sample_point(region, w, &mut rng)?;
                let r = rng.random_range(0.05..=1.0) * region.boundary_distance(x)? / (3.0 * c);
                Ok(Pair {
                    x,
                    y: sample_near(region, x, r, &mut rng)?,
                    kind: PairKind::Near,
                })
            }
            _ => {
                let z = sample_point(region, w, &mut rng)?;
                let t = rng.random_range(0.05..0.95);
                let r = t * region.boundary_distance(z)? / (2.0 * c);
                Ok(Pair {
                    x: sample_near(region, z, r, &mut rng)?,
                    y: sample_near(region, z, r, &mut rng)?,
                    kind: PairKind::Ball { z, t },
                })
            }
        })
        .collect()
}

fn check(value: f64, lo: f64, hi: f64, eps: f64, strict_lo: bool) -> bool {
    let lo_ok = if strict_lo && lo > 0.0 {
        value > lo / (1.0 + eps)
    } else {
        value >= lo / (1.0 + eps)
    };
    lo_ok && value <= hi * (1.0 + eps)
}

/// Checks the three comparison inequalities between `k_G` and
/// `|x - y| / δ_G` on seeded pairs. `eps` is the relative mesh tolerance.
pub fn comparison_check(mesh: &QhMesh, spec: &PairSpec, eps: f64) -> Result<InequalityReport> {
    let region = mesh.region();
    let c = region.quasiconvexity();
    let pairs = draw_pairs(region, spec, c, true)?;
    let rows: Vec<Vec<InequalityRow>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| -> Result<Vec<InequalityRow>> {
            let k = mesh.distance(p.x, p.y)?.distance;
            let oracle = region
                .as_plane()
                .and_then(|d| plane_oracle(d, p.x, p.y))
                .transpose()?;
            let dx = region.boundary_distance(p.x)?;
            let d = dist(p.x, p.y);
            let row = |clause: &str, value: f64, lo: f64, hi: f64, pass: bool| InequalityRow {
                id: format!("{i}:{clause}"),
                x: p.x,
                y: p.y,
                value,
                oracle,
                bound_lo: lo,
                bound_hi: hi,
                pass,
            };
            // clause 1 is stated for |x - y| against (e^k - 1) δ(x)
            let hi1 = k.exp_m1() * dx;
            let mut out = vec![row("1", d, 0.0, hi1, d <= hi1 * (1.0 + eps))];
            if let PairKind::Ball { z, t } = p.kind {
                let dz = region.boundary_distance(z)?;
                let lo = c / (c + t) * d / dz;
                let hi = c / (1.0 - (1.0 + c) / (2.0 * c) * t) * d / dz;
                out.push(row("2", k, lo, hi, check(k, lo, hi, eps, false)));
            }
            let true_k = oracle.unwrap_or(k);
            if d <= dx / (3.0 * c) || true_k <= 1.0 {
                let lo = 0.5 * d / dx;
                let hi = 3.0 * c * d / dx;
                out.push(row("3", k, lo, hi, check(k, lo, hi, eps, true)));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(InequalityReport {
        suite: "comparison".into(),
        tolerance: eps,
        pairs: pairs.len(),
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Checks `|x-y| <= d(x,y) <= c|x-y|` and `k/c <= k' <= c k` on seeded
/// pairs, with `k` from `mesh` and `k'` from `length_mesh`.
pub fn length_comparison_check(
    mesh: &QhMesh,
    length_mesh: &QhMesh,
    spec: &PairSpec,
    eps: f64,
) -> Result<InequalityReport> {
    if mesh.metric() != MetricKind::Ambient || length_mesh.metric() != MetricKind::Length {
        return Err(QhError::Configuration(
            "expected an ambient mesh and a length-metric mesh".into(),
        ));
    }
    let region = mesh.region();
    let space = region.space();
    let c = region.quasiconvexity();
    let pairs = draw_pairs(region, spec, c, false)?;
    let rows: Vec<Vec<InequalityRow>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| -> Result<Vec<InequalityRow>> {
            let e = dist(p.x, p.y);
            let d = space.length_distance(p.x, p.y)?;
            let k = mesh.distance(p.x, p.y)?.distance;
            let kp = length_mesh.distance(p.x, p.y)?.distance;
            let row = |clause: &str, value: f64, lo: f64, hi: f64, pass: bool| InequalityRow {
                id: format!("{i}:{clause}"),
                x: p.x,
                y: p.y,
                value,
                oracle: None,
                bound_lo: lo,
                bound_hi: hi,
                pass,
            };
            Ok(vec![
                row("1", d, e, c * e, check(d, e, c * e, 1e-12, false)),
                row("2", kp, k / c, c * k, check(kp, k / c, c * k, eps, false)),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(InequalityReport {
        suite: "length-comparison".into(),
        tolerance: eps,
        pairs: pairs.len(),
        rows: rows.into_iter().flatten().collect(),
    })
}

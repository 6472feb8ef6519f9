//! Sampling estimators for distortion coefficients. Every estimate is a
//! maximum over evaluated samples and therefore a lower bound for the true
//! coefficient.

mod qs;
mod relative;
mod ring;
mod semisolid;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use qs::{
    circle_distortion, estimate_local_weak_qs, estimate_qc, estimate_weak_qs, shear_witness,
    triple_ratio,
};
pub use relative::{estimate_relative, relative_ratio};
pub use ring::{estimate_ring, ring_ratio};
pub use semisolid::{estimate_semisolid, ALPHA_GRID};

use crate::error::{QhError, Result};
use crate::maps::MapSpec;
use crate::qhgraph::QhMesh;
use crate::sampling::Window;
use crate::Point;

/// Number of equispaced directions used on sampled circles.
pub const DIRECTIONS: usize = 64;

fn default_q() -> f64 {
    0.5
}
fn default_radii() -> Vec<f64> {
    vec![0.1, 0.01, 0.001]
}
fn default_t() -> Vec<f64> {
    vec![2.0, 10.0, 100.0]
}
fn default_n() -> Vec<f64> {
    vec![1.0, 10.0, 100.0]
}
fn default_eps() -> f64 {
    0.25
}
fn default_bins() -> usize {
    10
}
fn default_min_radius() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    /// Locality `q` for the local estimators.
    #[serde(default = "default_q")]
    pub locality_q: f64,
    /// Strictly decreasing radii for the quasiconformality table.
    #[serde(default = "default_radii")]
    pub radius_schedule: Vec<f64>,
    #[serde(default)]
    pub window: Option<Window>,
    /// Parameters `t > 1` of the inversion witness triples.
    #[serde(default = "default_t")]
    pub witness_t: Vec<f64>,
    /// Column indices `n` of the shear witness triples.
    #[serde(default = "default_n")]
    pub witness_n: Vec<f64>,
    /// Offset factor `ε ∈ (0, 1)` of the shear witness triples.
    #[serde(default = "default_eps")]
    pub witness_eps: f64,
    /// Number of bins of the relativity table.
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Ring balls with a smaller radius are skipped.
    #[serde(default = "default_min_radius")]
    pub min_radius: f64,
}

impl SampleSpec {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleSpec {
            seed,
            count,
            locality_q: default_q(),
            radius_schedule: default_radii(),
            window: None,
            witness_t: default_t(),
            witness_n: default_n(),
            witness_eps: default_eps(),
            bins: default_bins(),
            min_radius: default_min_radius(),
        }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = Some(window);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(QhError::Configuration(m));
        if self.count == 0 {
            return fail("sample count must be at least 1".into());
        }
        if !(self.locality_q > 0.0 && self.locality_q < 1.0) {
            return fail(format!(
                "locality q must lie in (0, 1), got {}",
                self.locality_q
            ));
        }
        if self.radius_schedule.iter().any(|r| !(*r > 0.0))
            || self.radius_schedule.windows(2).any(|w| !(w[1] < w[0]))
        {
            return fail("radius schedule must be positive and strictly decreasing".into());
        }
        if self.witness_t.iter().any(|t| !(*t > 1.0)) {
            return fail("inversion witness parameters must exceed 1".into());
        }
        if !(self.witness_eps > 0.0 && self.witness_eps < 1.0) {
            return fail(format!(
                "witness eps must lie in (0, 1), got {}",
                self.witness_eps
            ));
        }
        if self.witness_n.iter().any(|n| !(*n > 0.0)) {
            return fail("shear witness columns must be positive".into());
        }
        if self.bins == 0 {
            return fail("at least one bin is required".into());
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Quasiconformal,
    WeakQuasisymmetric,
    LocalWeakQuasisymmetric,
    Semisolid,
    Relative,
    Ring,
}

/// How to re-evaluate a witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    /// `points = [x, a, b]`, ratio `|fx - fa| / |fx - fb|`.
    Triple,
    /// `points = [x]`, largest over smallest image radius on the circle.
    Circle { radius: f64 },
    /// `points = [x, y]`, ratio `k'(fx, fy) / k(x, y)` on the meshes.
    QhPair,
    /// `points = [x, y]`, ratio `|fx - fy| / δ'(fx)`.
    RelativePair,
    /// `points = [z]`, ring ratio for the ball `B(z, radius)`.
    Ball { radius: f64, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub kind: WitnessKind,
    pub points: Vec<Point>,
    pub ratio: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub map: String,
    pub estimate: f64,
    /// Names of the two columns of `table`.
    pub columns: [String; 2],
    pub table: Vec<[f64; 2]>,
    pub params: BTreeMap<String, f64>,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub skipped: usize,
    pub seed: u64,
    pub count: usize,
}

impl PropertyReport {
    /// Re-evaluates the witness. Mesh witnesses need the source and image
    /// meshes used for the estimate.
    pub fn replay(&self, f: &MapSpec, meshes: Option<(&QhMesh, &QhMesh)>) -> Result<f64> {
        let w = self
            .witness
            .as_ref()
            .ok_or_else(|| QhError::Validation("report has no witness".into()))?;
        let p = &w.points;
        match w.kind {
            WitnessKind::Triple => triple_ratio(f, p[0], p[1], p[2]),
            WitnessKind::Circle { radius } => circle_distortion(f, p[0], radius),
            WitnessKind::QhPair => {
                let (src, img) = meshes.ok_or_else(|| {
                    QhError::Validation("replaying a mesh witness needs the meshes".into())
                })?;
                let t = src.distance(p[0], p[1])?.distance;
                let s = img.distance(f.eval(p[0])?, f.eval(p[1])?)?.distance;
                Ok(s / t)
            }
            WitnessKind::RelativePair => relative_ratio(f, p[0], p[1]),
            WitnessKind::Ball { radius, alpha } => ring_ratio(f, p[0], radius, alpha),
        }
    }
}

/// Index and value of the first maximum; NaN values are ignored.
pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_first() {
        assert_eq!(argmax([1.0, 3.0, 3.0, f64::NAN]), Some((1, 3.0)));
        assert_eq!(argmax([]), None);
    }

    #[test]
    fn spec_validation() {
        assert!(SampleSpec::new(1, 10).validate().is_ok());
        assert!(SampleSpec::new(1, 0).validate().is_err());
        let mut s = SampleSpec::new(1, 10);
        s.radius_schedule = vec![0.1, 0.2];
        assert!(s.validate().is_err());
        s = SampleSpec::new(1, 10);
        s.locality_q = 1.0;
        assert!(s.validate().is_err());
    }
}

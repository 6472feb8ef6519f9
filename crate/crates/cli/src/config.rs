//! Scenario files and flag overrides.
//!
//! A scenario is a TOML document. Every key is optional; missing values fall
//! back to the built-in domain defaults.
//!
//! ```toml
//! seed = 7
//! domain = "halfplane"          # built-in domain name
//! map = { kind = "half_plane_shear" }
//!
//! [mesh]
//! grading = 0.05
//! bbox = { x0 = -6.0, y0 = 0.0, x1 = 6.0, y1 = 8.0 }
//!
//! [sample]
//! count = 200
//! locality_q = 0.5
//! radius_schedule = [0.1, 0.01, 0.001]
//! window = { shape = "rect", x0 = -1.0, y0 = 0.3, x1 = 1.0, y1 = 2.0 }
//!
//! [output]
//! dir = "reports"
//! svg = true
//! ```
//!
//! A custom planar region replaces `domain` with a `[region]` table
//! (`kind = "half_plane" | "punctured" | "disk" | "polygon"`), and a curve
//! complex with a `[complex]` table listing `segments` and `removed` arcs as
//! pairs of `[x, y]` points.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use qhmetric::estimators::SampleSpec;
use qhmetric::sampling::Window;
use qhmetric::scenarios::Builtin;
use qhmetric::spaces::Segment;
use qhmetric::{
    pt, ComplexRegion, CurveComplex, MapSpec, MeshParams, PlaneDomain, Point, Rect, Region,
};
use serde::{Deserialize, Serialize};

pub const SEED_VAR: &str = "QH_SEED";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub seed: Option<u64>,
    pub domain: Option<String>,
    pub region: Option<PlaneDomain>,
    pub complex: Option<ComplexConfig>,
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub sample: SampleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexConfig {
    pub segments: Vec<[Point; 2]>,
    #[serde(default)]
    pub removed: Vec<[Point; 2]>,
    pub quasiconvexity: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub grading: Option<f64>,
    pub bbox: Option<Rect>,
    pub min_delta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub count: Option<usize>,
    pub locality_q: Option<f64>,
    pub radius_schedule: Option<Vec<f64>>,
    pub window: Option<Window>,
    pub bins: Option<usize>,
    pub witness_t: Option<Vec<f64>>,
    pub witness_n: Option<Vec<f64>>,
    pub witness_eps: Option<f64>,
    pub min_radius: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

/// Parses `"x,y"` into a point.
pub fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad x in `{s}`: {e}"))?;
    let y: f64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad y in `{s}`: {e}"))?;
    Ok(pt(x, y))
}

/// Map shorthands accepted by `--map`.
pub fn named_map(name: &str, domain: Option<&PlaneDomain>) -> Result<MapSpec> {
    Ok(match name {
        "identity" => MapSpec::identity(
            domain
                .cloned()
                .unwrap_or_else(PlaneDomain::upper_half_plane),
        ),
        "inversion" => MapSpec::Inversion,
        "shear" => MapSpec::HalfPlaneShear,
        "stretch" => MapSpec::affine(
            [2.0, 0.0, 0.0, 1.0],
            pt(0.0, 0.0),
            PlaneDomain::upper_half_plane(),
        )?,
        other => bail!("unknown map `{other}` (expected identity, inversion, shear or stretch)"),
    })
}

/// Reads `QH_SEED` if set.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .with_context(|| format!("{SEED_VAR}={v} is not an unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{SEED_VAR}: {e}")),
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn builtin(&self) -> Result<Option<Builtin>> {
        match &self.domain {
            None => Ok(None),
            Some(name) => Builtin::from_name(name).map(Some).ok_or_else(|| {
                let names: Vec<_> = Builtin::ALL.iter().map(|b| b.name()).collect();
                anyhow!(
                    "unknown domain `{name}` (expected one of {})",
                    names.join(", ")
                )
            }),
        }
    }

    /// The region `G`: an explicit complex or planar region, else the
    /// built-in domain, else the domain of the map.
    pub fn region(&self) -> Result<Region> {
        let explicit = [
            self.complex.is_some(),
            self.region.is_some(),
            self.domain.is_some(),
        ];
        if explicit.iter().filter(|b| **b).count() > 1 {
            bail!("give only one of `domain`, `region` and `complex`");
        }
        if let Some(cx) = &self.complex {
            let segs = cx
                .segments
                .iter()
                .map(|[a, b]| Segment::new(*a, *b))
                .collect();
            let mut x = CurveComplex::new(segs)?;
            if let Some(c) = cx.quasiconvexity {
                x = x.with_quasiconvexity(c)?;
            }
            let removed: Vec<(Point, Point)> = cx.removed.iter().map(|[a, b]| (*a, *b)).collect();
            return Ok(ComplexRegion::new(Arc::new(x), &removed)?.into());
        }
        if let Some(r) = &self.region {
            return Ok(r.clone().into());
        }
        if let Some(b) = self.builtin()? {
            return Ok(b.region());
        }
        if let Some(f) = &self.map {
            return Ok(f.source_region());
        }
        bail!("no domain given: set `domain`, `region`, `complex` or `map`")
    }

    /// The built-in whose region equals `region`, used for default mesh and
    /// sampling settings.
    fn defaults_for(&self, region: &Region) -> Result<Option<Builtin>> {
        if let Some(b) = self.builtin()? {
            return Ok(Some(b));
        }
        Ok(region.as_plane().and_then(|d| {
            Builtin::ALL
                .into_iter()
                .find(|b| b.region().as_plane().is_some_and(|e| e.approx_eq(d)))
        }))
    }

    pub fn mesh_params(&self, region: &Region) -> Result<MeshParams> {
        let grading = self.mesh.grading.unwrap_or(0.1);
        let mut p = match self.defaults_for(region)? {
            Some(b) => b.mesh_params(grading),
            None => MeshParams {
                grading,
                bbox: None,
                min_delta: None,
            },
        };
        if self.mesh.bbox.is_some() {
            p.bbox = self.mesh.bbox;
        }
        if self.mesh.min_delta.is_some() {
            p.min_delta = self.mesh.min_delta;
        }
        Ok(p)
    }

    pub fn window(&self, region: &Region) -> Result<Option<Window>> {
        if self.sample.window.is_some() {
            return Ok(self.sample.window);
        }
        Ok(self.defaults_for(region)?.and_then(|b| b.window()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| anyhow!("no seed given: set `seed`, pass --seed or set {SEED_VAR}"))
    }

    pub fn sample_spec(&self, region: &Region, default_count: usize) -> Result<SampleSpec> {
        let s = &self.sample;
        let mut spec = SampleSpec::new(self.seed()?, s.count.unwrap_or(default_count));
        spec.window = self.window(region)?;
        if let Some(q) = s.locality_q {
            spec.locality_q = q;
        }
        if let Some(r) = &s.radius_schedule {
            spec.radius_schedule = r.clone();
        }
        if let Some(b) = s.bins {
            spec.bins = b;
        }
        if let Some(t) = &s.witness_t {
            spec.witness_t = t.clone();
        }
        if let Some(n) = &s.witness_n {
            spec.witness_n = n.clone();
        }
        if let Some(e) = s.witness_eps {
            spec.witness_eps = e;
        }
        if let Some(m) = s.min_radius {
            spec.min_radius = m;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("0,1").unwrap(), pt(0.0, 1.0));
        assert_eq!(parse_point(" -2.5 , 3e-1").unwrap(), pt(-2.5, 0.3));
        assert!(parse_point("1;2").is_err());
        assert!(parse_point("a,2").is_err());
    }

    #[test]
    fn full_scenario_parses() {
        let text = r#"
            seed = 7
            domain = "halfplane"
            map = { kind = "half_plane_shear" }
            [mesh]
            grading = 0.05
            bbox = { x0 = -6.0, y0 = 0.0, x1 = 6.0, y1 = 8.0 }
            [sample]
            count = 20
            radius_schedule = [0.1, 0.01]
            window = { shape = "rect", x0 = -1.0, y0 = 0.3, x1 = 1.0, y1 = 2.0 }
            [output]
            svg = true
        "#;
        let s: Scenario = toml::from_str(text).unwrap();
        let g = s.region().unwrap();
        assert_eq!(s.mesh_params(&g).unwrap().grading, 0.05);
        let spec = s.sample_spec(&g, 100).unwrap();
        assert_eq!(spec.count, 20);
        assert_eq!(spec.seed, 7);
        assert_eq!(s.map, Some(MapSpec::HalfPlaneShear));
    }

    #[test]
    fn complex_scenario_parses() {
        let text = r#"
            [complex]
            segments = [[[-2.0, 0.0], [2.0, 0.0]], [[-2.0, 1.0], [2.0, 1.0]],
                        [[-2.0, 0.0], [-2.0, 1.0]], [[2.0, 0.0], [2.0, 1.0]]]
            removed = [[[-1.0, 1.0], [1.0, 1.0]]]
            quasiconvexity = 5.0
        "#;
        let s: Scenario = toml::from_str(text).unwrap();
        let g = s.region().unwrap();
        assert_eq!(g.boundary_distance(pt(0.0, 0.0)).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn bad_scenarios_are_rejected() {
        assert!(toml::from_str::<Scenario>("sead = 3").is_err());
        let s: Scenario = toml::from_str("domain = \"moon\"").unwrap();
        assert!(s.region().is_err());
        let s = Scenario::default();
        assert!(s.region().is_err());
        assert!(s.seed().is_err());
        assert!(named_map("twist", None).is_err());
    }
}

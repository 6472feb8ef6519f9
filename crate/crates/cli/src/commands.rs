use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qhmetric::constants::{chain_constants, FunctionTable};
use qhmetric::estimators::{
    estimate_local_weak_qs, estimate_qc, estimate_relative, estimate_ring, estimate_semisolid,
    estimate_weak_qs, PropertyReport,
};
use qhmetric::qhgraph::{plane_oracle, MetricKind};
use qhmetric::{MapSpec, Point, QhMesh, Region};

use crate::config::{env_seed, named_map, parse_point, Scenario};
use crate::output::{self, Row};
use crate::repro::{run_suite, ReproOptions, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qhm",
    version,
    about = "Quasihyperbolic distances and distortion estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the scenario seed and QH_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Built-in domain: halfplane, punctured, disk, lshape, frame-omega, frame-bottom.
    #[arg(long)]
    pub domain: Option<String>,
    /// Mesh grading factor in (0, 0.5].
    #[arg(long)]
    pub grading: Option<f64>,
    /// Directory for CSV/JSON reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    #[command(flatten)]
    pub common: Common,
    /// identity, inversion, shear or stretch; overrides the scenario map.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Locality of the local estimator, in (0, 1).
    #[arg(long)]
    pub q: Option<f64>,
    /// Fail (exit 2) when the estimate exceeds this coefficient.
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasihyperbolic distance between two points.
    Qh {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point,
        /// Use the boundary distance of the length metric.
        #[arg(long)]
        length: bool,
    },
    /// Component ball node set.
    Ball {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Point,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 0.01)]
        resolution: f64,
    },
    /// Quasiconformal distortion table.
    CheckQc(EstimatorArgs),
    /// Weak quasisymmetry coefficient.
    CheckWqs(EstimatorArgs),
    /// Locally weak quasisymmetry coefficient.
    CheckLwqs(EstimatorArgs),
    /// Semisolidity slope and envelope.
    CheckSemisolid(EstimatorArgs),
    /// Relativity envelope.
    CheckRelative {
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long, default_value_t = 0.5)]
        t0: f64,
    },
    /// Ring property coefficient.
    CheckRing {
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
        #[arg(long, default_value_t = 12.0)]
        beta: f64,
    },
    /// Closed-form constants.
    Constants {
        #[arg(long = "H")]
        h: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        cprime: f64,
        /// Multiplicative constant of the three-point condition.
        #[arg(long = "K0")]
        k0_tv: Option<f64>,
        /// Exponent of the three-point condition, in (0, 1].
        #[arg(long)]
        alpha_exp: Option<f64>,
        /// Slope `s` of a linear control function `φ(t) = s t`.
        #[arg(long)]
        phi_slope: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduction suite with pinned seeds.
    Repro {
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
        /// Single shear column.
        #[arg(long)]
        n: Option<f64>,
        /// Coefficient the witnesses must exceed.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        grading: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, errors to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_CONFIG
        }
    }
}

fn scenario(common: &Common) -> Result<Scenario> {
    let mut s = match &common.config {
        Some(p) => Scenario::load(p)?,
        None => Scenario::default(),
    };
    if let Some(seed) = env_seed()? {
        s.seed = Some(seed);
    }
    if common.seed.is_some() {
        s.seed = common.seed;
    }
    if let Some(d) = &common.domain {
        s.domain = Some(d.clone());
        s.region = None;
        s.complex = None;
    }
    if common.grading.is_some() {
        s.mesh.grading = common.grading;
    }
    if common.out.is_some() {
        s.output.dir = common.out.clone();
    }
    s.output.svg |= common.svg;
    Ok(s)
}

fn save(dir: Option<&Path>, name: &str, ext: &str, contents: &str) -> Result<()> {
    if let Some(d) = dir {
        output::write(&d.join(format!("{name}.{ext}")), contents)?;
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Qh {
            common,
            from,
            to,
            length,
        } => qh(&common, from, to, length, out),
        Command::Ball {
            common,
            center,
            radius,
            resolution,
        } => ball(&common, center, radius, resolution, out),
        Command::CheckQc(a) => estimator("check-qc", &a, out, |f, s, _| {
            Ok(estimate_qc(f, &s.sample_spec(&f.source_region(), 200)?)?)
        }),
        Command::CheckWqs(a) => estimator("check-wqs", &a, out, |f, s, _| {
            Ok(estimate_weak_qs(
                f,
                &s.sample_spec(&f.source_region(), 1000)?,
            )?)
        }),
        Command::CheckLwqs(a) => estimator("check-lwqs", &a, out, |f, s, _| {
            Ok(estimate_local_weak_qs(
                f,
                &s.sample_spec(&f.source_region(), 1000)?,
            )?)
        }),
        Command::CheckSemisolid(a) => estimator("check-semisolid", &a, out, |f, s, meshes| {
            let (src, img) = meshes.context("semisolid check needs meshes")?;
            Ok(estimate_semisolid(
                f,
                src,
                img,
                &s.sample_spec(&f.source_region(), 200)?,
            )?)
        }),
        Command::CheckRelative { est, t0 } => estimator("check-relative", &est, out, |f, s, _| {
            Ok(estimate_relative(
                f,
                &s.sample_spec(&f.source_region(), 1000)?,
                t0,
            )?)
        }),
        Command::CheckRing { est, alpha, beta } => estimator("check-ring", &est, out, |f, s, _| {
            Ok(estimate_ring(
                f,
                &s.sample_spec(&f.source_region(), 200)?,
                alpha,
                beta,
            )?)
        }),
        Command::Constants {
            h,
            q,
            c,
            cprime,
            k0_tv,
            alpha_exp,
            phi_slope,
            out: dir,
        } => constants(
            h,
            q,
            c,
            cprime,
            k0_tv,
            alpha_exp,
            phi_slope,
            dir.as_deref(),
            out,
        ),
        Command::Repro {
            suite,
            seed,
            n,
            h,
            grading,
            out: dir,
        } => {
            let opts = ReproOptions {
                seed: seed.or(env_seed()?),
                n,
                h,
                grading,
            };
            repro(suite, &opts, dir.as_deref(), out)
        }
    }
}

fn qh(common: &Common, x: Point, y: Point, length: bool, out: &mut dyn Write) -> Result<bool> {
    let s = scenario(common)?;
    let g = s.region()?;
    let params = s.mesh_params(&g)?;
    let metric = if length {
        MetricKind::Length
    } else {
        MetricKind::Ambient
    };
    let mesh = QhMesh::build(&g, &params, metric)?;
    let path = mesh.distance(x, y)?;
    writeln!(out, "k = {}", path.distance)?;
    writeln!(
        out,
        "nodes = {}, path nodes = {}",
        mesh.node_count(),
        path.node_path.len()
    )?;
    if let Some(exact) = g
        .as_plane()
        .and_then(|d| plane_oracle(d, x, y))
        .transpose()?
    {
        writeln!(out, "oracle = {exact}")?;
        writeln!(
            out,
            "relative error = {}",
            (path.distance - exact).abs() / exact
        )?;
    }
    save(s.output.dir.as_deref(), "qh", "json", &output::json(&path)?)?;
    Ok(true)
}

fn ball(common: &Common, z: Point, r: f64, h: f64, out: &mut dyn Write) -> Result<bool> {
    let s = scenario(common)?;
    let g = s.region()?;
    let b = g.component_ball(z, r, h)?;
    writeln!(out, "nodes = {}", b.len())?;
    writeln!(out, "frontier distance = {}", b.frontier_distance())?;
    writeln!(out, "diameter = {}", b.diameter())?;
    let dir = s.output.dir.as_deref();
    save(dir, "ball", "json", &output::json(&b)?)?;
    if s.output.svg {
        let pts: Vec<[f64; 2]> = b.nodes.iter().map(|p| [p.re, p.im]).collect();
        save(
            dir,
            "ball",
            "svg",
            &output::svg_scatter("component ball", "x", "y", &pts),
        )?;
    }
    Ok(true)
}

type Meshes<'a> = Option<(&'a QhMesh, &'a QhMesh)>;

fn resolve_map(a: &EstimatorArgs, s: &Scenario) -> Result<MapSpec> {
    let explicit = s.domain.is_some() || s.region.is_some() || s.complex.is_some();
    let region = if explicit { Some(s.region()?) } else { None };
    let plane = match &region {
        Some(Region::Complex(_)) => bail!("maps are defined between planar domains"),
        Some(Region::Plane(d)) => Some(d),
        None => None,
    };
    let f = match (&a.map, &s.map) {
        (Some(name), _) => named_map(name, plane)?,
        (None, Some(f)) => f.clone(),
        (None, None) => named_map("identity", plane)?,
    };
    f.validate()?;
    if let Some(d) = plane {
        if !d.approx_eq(&f.source()) {
            bail!(
                "the domain of {} is the {}, not the {}",
                f.name(),
                f.source().name(),
                d.name()
            );
        }
    }
    Ok(f)
}

fn estimator(
    name: &str,
    a: &EstimatorArgs,
    out: &mut dyn Write,
    run: impl FnOnce(&MapSpec, &Scenario, Meshes) -> Result<PropertyReport>,
) -> Result<bool> {
    let mut s = scenario(&a.common)?;
    if a.count.is_some() {
        s.sample.count = a.count;
    }
    if a.q.is_some() {
        s.sample.locality_q = a.q;
    }
    let f = resolve_map(a, &s)?;
    let src_region = f.source_region();
    let img_region = f.image_region()?;
    let meshes = if name == "check-semisolid" {
        let src = QhMesh::build(
            &src_region,
            &s.mesh_params(&src_region)?,
            MetricKind::Ambient,
        )?;
        let shared = src_region
            .as_plane()
            .zip(img_region.as_plane())
            .is_some_and(|(p, q)| p.approx_eq(q));
        let img = if shared {
            None
        } else {
            Some(QhMesh::build(
                &img_region,
                &s.mesh_params(&img_region)?,
                MetricKind::Ambient,
            )?)
        };
        Some((src, img))
    } else {
        None
    };
    let pair = meshes
        .as_ref()
        .map(|(src, img)| (src, img.as_ref().unwrap_or(src)));
    let rep = run(&f, &s, pair)?;

    writeln!(
        out,
        "property: {}",
        serde_json::to_value(rep.property)?.as_str().unwrap_or("")
    )?;
    writeln!(out, "map: {}", rep.map)?;
    writeln!(out, "estimate (lower bound): {}", rep.estimate)?;
    for (k, v) in &rep.params {
        writeln!(out, "{k}: {v}")?;
    }
    writeln!(
        out,
        "samples: {} used, {} skipped, seed {}",
        rep.samples_used, rep.skipped, rep.seed
    )?;
    if let Some(w) = &rep.witness {
        let pts: Vec<String> = w
            .points
            .iter()
            .map(|p| format!("({}, {})", p.re, p.im))
            .collect();
        writeln!(
            out,
            "witness: {} at {} with ratio {}",
            w.label,
            pts.join(" "),
            w.ratio
        )?;
    }
    let pass = a.bound.is_none_or(|b| rep.estimate <= b);
    if let Some(b) = a.bound {
        let verdict = if pass { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} estimate {} against bound {b}", rep.estimate)?;
    }

    let dir = s.output.dir.as_deref();
    save(dir, name, "json", &output::json(&rep)?)?;
    let rows: Vec<Row> = rep
        .table
        .iter()
        .map(|[t, v]| {
            let ok = a.bound.is_none_or(|b| *v <= b);
            Row::scalar(format!("{}={t}", rep.columns[0]), *v, ok).bounds(None, a.bound)
        })
        .collect();
    save(dir, name, "csv", &output::csv(&rows))?;
    if s.output.svg {
        let svg = output::svg_scatter(
            &format!("{name}: {}", rep.map),
            &rep.columns[0],
            &rep.columns[1],
            &rep.table,
        );
        save(dir, name, "svg", &svg)?;
    }
    Ok(pass)
}

fn number(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn fraction_hint(v: f64) -> String {
    let inv = 1.0 / v;
    if v > 0.0 && v < 1.0 && inv < 1e15 && (inv - inv.round()).abs() <= 1e-9 * inv {
        format!(" (1/{})", inv.round())
    } else {
        String::new()
    }
}

#[allow(clippy::too_many_arguments)]
fn constants(
    h: f64,
    q: f64,
    c: f64,
    cprime: f64,
    k0_tv: Option<f64>,
    alpha_exp: Option<f64>,
    phi_slope: Option<f64>,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let mut set = chain_constants(h, q, c, cprime)?;
    if k0_tv.is_some() || alpha_exp.is_some() {
        let (k, a) = (
            k0_tv.unwrap_or(set.k0_tv),
            alpha_exp.unwrap_or(set.alpha_exp),
        );
        set = set.with_tv_constants(k, a)?;
    }
    if let Some(s) = phi_slope {
        let grid: Vec<f64> = (0..=64).map(|i| i as f64 * 0.25).collect();
        let phi = FunctionTable::from_fn(&grid, |t| s * t)?;
        set = set.with_phi(&phi)?;
    }
    for (k, v) in set.entries() {
        writeln!(out, "{k} = {}{}", number(v), fraction_hint(v))?;
    }
    save(dir, "constants", "json", &output::json(&set)?)?;
    Ok(true)
}

fn repro(
    suite: Suite,
    opts: &ReproOptions,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let rep = run_suite(suite, opts)?;
    for a in &rep.assertions {
        let verdict = if a.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {}: {} ({})", suite.name(), a.name, a.detail)?;
    }
    save(dir, suite.name(), "json", &output::json(&rep)?)?;
    save(dir, suite.name(), "csv", &output::csv(&rep.rows))?;
    Ok(rep.passed())
}

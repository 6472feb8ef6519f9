//! Quasihyperbolic geometry toolkit.
//!
//! The crate realizes the quasihyperbolic metric
//! `k_G(x, y) = inf ∫_γ |dz| / δ_G(z)` on proper subdomains of two kinds of
//! metric spaces (the Euclidean plane and planar curve complexes), computes
//! component balls, and provides sampling estimators for the distortion
//! properties of homeomorphisms between such domains: quasiconformality,
//! weak and locally weak quasisymmetry, semisolidity, relativity and the ring
//! property. The [`constants`] module evaluates the closed-form constants
//! that connect these properties.
//!
//! Modules:
//! - [`spaces`]: ambient spaces, subdomains, boundary distance, length metric, component balls
//! - [`qhgraph`]: graded meshes and shortest-path quasihyperbolic distances
//! - [`maps`]: homeomorphisms with exact forward/inverse evaluation
//! - [`estimators`]: Monte-Carlo coefficient estimators
//! - [`constants`]: closed-form constants and control functions
//! - [`sampling`]: seeded point sampling in regions
//! - [`scenarios`]: the built-in domains and maps used by the reproduction suites

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod maps;
pub mod qhgraph;
pub mod sampling;
pub mod scenarios;
pub mod spaces;

/// Planar points are complex numbers: `re` is the x coordinate, `im` the y coordinate.
pub type Point = num_complex::Complex64;

pub use error::{QhError, Result};
pub use geometry::{pt, Rect};
pub use maps::MapSpec;
pub use qhgraph::{MeshParams, PathResult, QhMesh};
pub use spaces::{ComplexRegion, ComponentBall, CurveComplex, PlaneDomain, Region, SpaceModel};

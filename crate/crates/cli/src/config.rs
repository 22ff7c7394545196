//! JSON run configuration: schema, parsing, and conversion into solver
//! inputs.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use slabsn::{
    build_mesh, build_mesh_nonuniform, gauss_legendre, BoundaryKind, BoundaryModel, BoundarySpec,
    Closure, IterationOptions, MaterialRegion, Mesh, QuadratureSet, SchemeKind,
};

fn default_closure() -> String {
    "dd".to_string()
}

fn default_order() -> usize {
    10
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iterations() -> usize {
    10_000
}

fn default_lp_alpha() -> f64 {
    0.5
}

/// One material region in configuration order, left to right.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    /// Region thickness.
    pub width: f64,
    /// Total cross section.
    pub sigma_t: f64,
    /// Scattering cross section.
    pub sigma_s: f64,
    /// Isotropic volumetric source.
    pub q: f64,
}

/// Boundary conditions by name: "reflective" or "vacuum".
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    /// Left edge condition.
    pub left: String,
    /// Right edge condition.
    pub right: String,
}

/// Full problem-and-solver configuration; unknown keys are rejected so typos
/// fail loudly.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Iteration scheme: "si", "cqd", or "lpcqd".
    pub scheme: String,
    /// Spatial closure: "dd" or "sc".
    #[serde(default = "default_closure")]
    pub closure: String,
    /// Even Gauss-Legendre order.
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    /// Left and right boundary conditions.
    pub boundary: BoundaryConfig,
    /// Material layout, left to right.
    pub regions: Vec<RegionConfig>,
    /// Uniform cell width; exactly one of this and `cell_widths`.
    #[serde(default)]
    pub cell_width: Option<f64>,
    /// Explicit per-cell widths; exactly one of this and `cell_width`.
    #[serde(default)]
    pub cell_widths: Option<Vec<f64>>,
    /// Relative convergence tolerance.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Outer iteration cap.
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Prolongation weight on a vacuum boundary cell.
    #[serde(default = "default_lp_alpha")]
    pub lp_alpha: f64,
}

/// Reads and parses a configuration file.
pub fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read configuration {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("invalid configuration {}", path.display()))
}

/// Parses a scheme name.
pub fn parse_scheme(name: &str) -> Result<SchemeKind> {
    match name {
        "si" => Ok(SchemeKind::Si),
        "cqd" => Ok(SchemeKind::Cqd),
        "lpcqd" => Ok(SchemeKind::LpCqd),
        other => bail!("unknown scheme {other:?} (expected si, cqd, or lpcqd)"),
    }
}

/// Parses a closure name.
pub fn parse_closure(name: &str) -> Result<Closure> {
    match name {
        "dd" => Ok(Closure::DiamondDifference),
        "sc" => Ok(Closure::StepCharacteristic),
        other => bail!("unknown closure {other:?} (expected dd or sc)"),
    }
}

/// Parses a boundary condition name.
pub fn parse_boundary_kind(name: &str) -> Result<BoundaryKind> {
    match name {
        "reflective" => Ok(BoundaryKind::Reflective),
        "vacuum" => Ok(BoundaryKind::Vacuum),
        other => bail!("unknown boundary {other:?} (expected reflective or vacuum)"),
    }
}

/// Parses a frequency-grid boundary model name.
pub fn parse_boundary_model(name: &str) -> Result<BoundaryModel> {
    match name {
        "periodic" => Ok(BoundaryModel::Periodic),
        "reflective" => Ok(BoundaryModel::Reflective),
        other => bail!("unknown boundary model {other:?} (expected periodic or reflective)"),
    }
}

/// Solver-ready inputs produced from a [`RunConfig`].
pub struct BuiltProblem {
    /// Discretized problem.
    pub mesh: Mesh,
    /// Iteration scheme.
    pub scheme: SchemeKind,
    /// Spatial closure.
    pub closure: Closure,
    /// Angular quadrature.
    pub quad: QuadratureSet,
    /// Outer iteration options.
    pub opts: IterationOptions,
}

impl RunConfig {
    /// Validates the configuration and builds the solver inputs.
    pub fn build(&self) -> Result<BuiltProblem> {
        let scheme = parse_scheme(&self.scheme)?;
        let closure = parse_closure(&self.closure)?;
        let quad = gauss_legendre(self.quadrature_order)?;
        let boundary = BoundarySpec {
            left: parse_boundary_kind(&self.boundary.left)?,
            right: parse_boundary_kind(&self.boundary.right)?,
        };
        let regions: Vec<MaterialRegion> = self
            .regions
            .iter()
            .map(|r| MaterialRegion {
                width: r.width,
                sigma_t: r.sigma_t,
                sigma_s: r.sigma_s,
                q: r.q,
            })
            .collect();
        let mesh = match (&self.cell_width, &self.cell_widths) {
            (Some(w), None) => build_mesh(&regions, boundary, *w)?,
            (None, Some(ws)) => build_mesh_nonuniform(&regions, boundary, ws)?,
            _ => bail!("exactly one of cell_width and cell_widths must be given"),
        };
        let opts = IterationOptions {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            lp_boundary_alpha: self.lp_alpha,
            ..IterationOptions::default()
        };
        Ok(BuiltProblem {
            mesh,
            scheme,
            closure,
            quad,
            opts,
        })
    }
}

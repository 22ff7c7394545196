//! Slab problem description and fine-mesh construction.
//!
//! A problem is a stack of homogeneous material layers with a boundary
//! condition on each end. Mesh construction slices the layers into cells —
//! either uniformly or from an explicit width list — while refusing any cell
//! that would straddle a material interface.

use crate::error::{Error, Result};

/// Relative tolerance for matching region boundaries to cell edges.
const ALIGNMENT_REL_TOL: f64 = 1e-9;

/// Edge condition at one end of the slab.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Incoming intensity mirrors the outgoing intensity.
    Reflective,
    /// No incoming intensity.
    Vacuum,
}

/// Boundary conditions for the two slab edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

/// One homogeneous material layer of the slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialRegion {
    /// Layer thickness (cm).
    pub width: f64,
    /// Total cross section (1/cm).
    pub sigma_t: f64,
    /// Scattering cross section (1/cm); never exceeds `sigma_t`.
    pub sigma_s: f64,
    /// Isotropic volumetric source density.
    pub q: f64,
}

/// The fine computational mesh: per-cell widths, cross sections, and sources.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    widths: Vec<f64>,
    sigma_t: Vec<f64>,
    sigma_s: Vec<f64>,
    sigma_a: Vec<f64>,
    q: Vec<f64>,
    edges: Vec<f64>,
    boundary: BoundarySpec,
}

impl Mesh {
    /// Number of cells.
    pub fn cell_count(&self) -> usize {
        self.widths.len()
    }

    /// Per-cell widths (cm).
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// Per-cell total cross sections.
    pub fn sigma_t(&self) -> &[f64] {
        &self.sigma_t
    }

    /// Per-cell scattering cross sections.
    pub fn sigma_s(&self) -> &[f64] {
        &self.sigma_s
    }

    /// Per-cell absorption cross sections (total minus scattering).
    pub fn sigma_a(&self) -> &[f64] {
        &self.sigma_a
    }

    /// Per-cell source densities.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Edge positions, length `cell_count() + 1`, starting at 0.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Cell-center positions.
    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.cell_count())
            .map(|j| 0.5 * (self.edges[j] + self.edges[j + 1]))
            .collect()
    }

    /// Boundary conditions.
    pub fn boundary(&self) -> BoundarySpec {
        self.boundary
    }

    /// Total slab width.
    pub fn total_width(&self) -> f64 {
        *self.edges.last().expect("mesh has at least one edge")
    }

    /// Scattering ratio of cell `j`; zero for a void cell.
    pub fn scattering_ratio(&self, j: usize) -> f64 {
        if self.sigma_t[j] > 0.0 {
            self.sigma_s[j] / self.sigma_t[j]
        } else {
            0.0
        }
    }
}

fn validate_regions(regions: &[MaterialRegion]) -> Result<()> {
    if regions.is_empty() {
        return Err(Error::InvalidArgument {
            reason: "at least one material region is required".into(),
        });
    }
    for (i, r) in regions.iter().enumerate() {
        let fail = |reason: &str| {
            Err(Error::InvalidRegion {
                region: i,
                reason: reason.into(),
            })
        };
        if !(r.width > 0.0) || !r.width.is_finite() {
            return fail("width must be positive and finite");
        }
        if !(r.sigma_t >= 0.0) || !r.sigma_t.is_finite() {
            return fail("sigma_t must be nonnegative and finite");
        }
        if !(r.sigma_s >= 0.0) || !r.sigma_s.is_finite() {
            return fail("sigma_s must be nonnegative and finite");
        }
        if !(r.q >= 0.0) || !r.q.is_finite() {
            return fail("q must be nonnegative and finite");
        }
        if r.sigma_s > r.sigma_t {
            return fail("sigma_s exceeds sigma_t");
        }
    }
    Ok(())
}

fn assemble(cells: Vec<(f64, usize)>, regions: &[MaterialRegion], boundary: BoundarySpec) -> Mesh {
    let mut mesh = Mesh {
        widths: Vec::with_capacity(cells.len()),
        sigma_t: Vec::with_capacity(cells.len()),
        sigma_s: Vec::with_capacity(cells.len()),
        sigma_a: Vec::with_capacity(cells.len()),
        q: Vec::with_capacity(cells.len()),
        edges: Vec::with_capacity(cells.len() + 1),
        boundary,
    };
    mesh.edges.push(0.0);
    let mut pos = 0.0;
    for (w, region) in cells {
        let r = &regions[region];
        mesh.widths.push(w);
        mesh.sigma_t.push(r.sigma_t);
        mesh.sigma_s.push(r.sigma_s);
        mesh.sigma_a.push(r.sigma_t - r.sigma_s);
        mesh.q.push(r.q);
        pos += w;
        mesh.edges.push(pos);
    }
    mesh
}

/// Builds a uniform mesh: every region is sliced into cells of `cell_width`.
///
/// Each region width must be an integer multiple of the cell width (within a
/// small relative tolerance that forgives decimal round-off).
pub fn build_mesh(
    regions: &[MaterialRegion],
    boundary: BoundarySpec,
    cell_width: f64,
) -> Result<Mesh> {
    validate_regions(regions)?;
    if !(cell_width > 0.0) || !cell_width.is_finite() {
        return Err(Error::InvalidArgument {
            reason: "cell_width must be positive and finite".into(),
        });
    }
    let mut cells = Vec::new();
    for (i, r) in regions.iter().enumerate() {
        let ratio = r.width / cell_width;
        let count = ratio.round();
        if count < 1.0 || (ratio - count).abs() > ALIGNMENT_REL_TOL * ratio.max(1.0) {
            return Err(Error::MisalignedRegion { region: i });
        }
        for _ in 0..count as usize {
            cells.push((cell_width, i));
        }
    }
    Ok(assemble(cells, regions, boundary))
}

/// Builds a mesh from an explicit per-cell width list.
///
/// The cumulative widths must hit every region boundary; a cell that would
/// straddle an interface is rejected.
pub fn build_mesh_nonuniform(
    regions: &[MaterialRegion],
    boundary: BoundarySpec,
    widths: &[f64],
) -> Result<Mesh> {
    validate_regions(regions)?;
    if widths.is_empty() {
        return Err(Error::InvalidArgument {
            reason: "at least one cell width is required".into(),
        });
    }
    let total: f64 = regions.iter().map(|r| r.width).sum();
    let tol = ALIGNMENT_REL_TOL * total;
    let mut cells = Vec::with_capacity(widths.len());
    let mut region = 0usize;
    let mut target = regions[0].width;
    let mut pos = 0.0;
    for (i, &w) in widths.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidArgument {
                reason: format!("cell width {i} must be positive and finite"),
            });
        }
        if region >= regions.len() {
            return Err(Error::MisalignedRegion {
                region: regions.len() - 1,
            });
        }
        pos += w;
        if pos > target + tol {
            return Err(Error::MisalignedRegion { region });
        }
        cells.push((w, region));
        if (pos - target).abs() <= tol {
            region += 1;
            if region < regions.len() {
                target += regions[region].width;
            }
        }
    }
    if region != regions.len() {
        return Err(Error::MisalignedRegion { region });
    }
    Ok(assemble(cells, regions, boundary))
}

//! Corrected low-order flux solve.
//!
//! Builds the cell-centered diffusion-like system whose solution reproduces
//! the transport scalar flux exactly once the outer iteration has converged.
//! Per-cell ratio factors E (second moment over scalar flux) set the
//! diffusive part; per-edge correction factors pin the low-order edge
//! currents to the transport edge currents at the fixed point. The system is
//! tridiagonal and solved directly.

use crate::error::{Error, Result};
use crate::problem::{BoundaryKind, Mesh};
use crate::sweep::Moments;

/// Scalar fluxes at or below this floor abort correction construction: the
/// factors divide by the flux, and continuing would poison the solve.
pub const FLUX_FLOOR: f64 = 1e-14;

/// Per-cell and per-edge correction data driving the low-order solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionFields {
    /// Per-cell ratio of second angular moment to scalar flux.
    pub eddington: Vec<f64>,
    /// Correction factor on each interior edge; entry `i` sits between cells
    /// `i` and `i + 1`.
    pub dhat_interior: Vec<f64>,
    /// Boundary correction factor on a vacuum left edge (absent when the left
    /// edge is reflective and the edge current is pinned to zero).
    pub dhat_left: Option<f64>,
    /// Boundary correction factor on a vacuum right edge.
    pub dhat_right: Option<f64>,
}

/// Per-cell ratio of the second angular moment to the scalar flux.
pub fn eddington_factors(m: &Moments) -> Result<Vec<f64>> {
    m.phi
        .iter()
        .zip(&m.phi2)
        .enumerate()
        .map(|(cell, (&phi, &phi2))| {
            if phi <= FLUX_FLOOR {
                Err(Error::NonPositiveFlux { cell })
            } else {
                Ok(phi2 / phi)
            }
        })
        .collect()
}

/// Inverse optical width of the edge between cells `j` and `j + 1`: the
/// discrete weight of the (1/sigma_t) d/dx operator there.
fn edge_beta(mesh: &Mesh, j: usize) -> f64 {
    2.0 / (mesh.sigma_t()[j] * mesh.widths()[j] + mesh.sigma_t()[j + 1] * mesh.widths()[j + 1])
}

/// Edge correction factors from transport currents and moments, bundled with
/// the per-cell E factors into the full correction set.
///
/// Interior edges divide the current mismatch by the mean of the adjacent
/// cell fluxes; a vacuum boundary edge divides the boundary current by the
/// boundary cell flux; a reflective edge carries no factor because its
/// low-order current is pinned to zero.
pub fn dhat_factors(m: &Moments, mesh: &Mesh, eddington: Vec<f64>) -> Result<CorrectionFields> {
    let nj = mesh.cell_count();
    if m.phi.len() != nj || eddington.len() != nj || m.current_edges.len() != nj + 1 {
        return Err(Error::DimensionMismatch {
            context: "moments shape differs from mesh",
        });
    }
    for (cell, &phi) in m.phi.iter().enumerate() {
        if phi <= FLUX_FLOOR {
            return Err(Error::NonPositiveFlux { cell });
        }
    }
    let mut dhat_interior = Vec::with_capacity(nj.saturating_sub(1));
    for i in 0..nj.saturating_sub(1) {
        let beta = edge_beta(mesh, i);
        let numerator = m.current_edges[i + 1] + beta * (m.phi2[i + 1] - m.phi2[i]);
        let dhat = numerator / (0.5 * (m.phi[i] + m.phi[i + 1]));
        if !dhat.is_finite() {
            return Err(Error::InvalidArgument {
                reason: format!("non-finite correction factor at interior edge {i}"),
            });
        }
        dhat_interior.push(dhat);
    }
    let dhat_left = match mesh.boundary().left {
        BoundaryKind::Reflective => None,
        BoundaryKind::Vacuum => Some(m.current_edges[0] / m.phi[0]),
    };
    let dhat_right = match mesh.boundary().right {
        BoundaryKind::Reflective => None,
        BoundaryKind::Vacuum => Some(m.current_edges[nj] / m.phi[nj - 1]),
    };
    for v in [dhat_left, dhat_right].into_iter().flatten() {
        if !v.is_finite() {
            return Err(Error::InvalidArgument {
                reason: "non-finite boundary correction factor".into(),
            });
        }
    }
    Ok(CorrectionFields {
        eddington,
        dhat_interior,
        dhat_left,
        dhat_right,
    })
}

/// Solves the corrected low-order balance for the accelerated scalar flux.
///
/// Each cell balances edge-current differences against absorption and the
/// source; interior edge currents combine the E-weighted two-point difference
/// with the correction factor times the mean adjacent flux, reflective edges
/// carry zero current, and vacuum edges carry the boundary factor times the
/// boundary cell flux.
pub fn assemble_and_solve(mesh: &Mesh, corr: &CorrectionFields) -> Result<Vec<f64>> {
    let nj = mesh.cell_count();
    if corr.eddington.len() != nj || corr.dhat_interior.len() + 1 != nj.max(1) {
        return Err(Error::DimensionMismatch {
            context: "correction fields shape differs from mesh",
        });
    }
    let left_vacuum = mesh.boundary().left == BoundaryKind::Vacuum;
    let right_vacuum = mesh.boundary().right == BoundaryKind::Vacuum;
    if corr.dhat_left.is_some() != left_vacuum || corr.dhat_right.is_some() != right_vacuum {
        return Err(Error::DimensionMismatch {
            context: "boundary correction factors disagree with mesh boundary",
        });
    }
    let e = &corr.eddington;
    let mut sub = vec![0.0; nj.saturating_sub(1)];
    let mut diag = vec![0.0; nj];
    let mut sup = vec![0.0; nj.saturating_sub(1)];
    let mut rhs = vec![0.0; nj];
    for j in 0..nj {
        diag[j] = mesh.widths()[j] * mesh.sigma_a()[j];
        rhs[j] = mesh.widths()[j] * mesh.q()[j];
    }
    for i in 0..nj.saturating_sub(1) {
        let beta = edge_beta(mesh, i);
        let dhat = corr.dhat_interior[i];
        // Current on edge i flows out of row i and into row i + 1.
        diag[i] += beta * e[i] + 0.5 * dhat;
        sup[i] += -beta * e[i + 1] + 0.5 * dhat;
        diag[i + 1] += beta * e[i + 1] - 0.5 * dhat;
        sub[i] += -beta * e[i] - 0.5 * dhat;
    }
    if let Some(dl) = corr.dhat_left {
        diag[0] -= dl;
    }
    if let Some(dr) = corr.dhat_right {
        diag[nj - 1] += dr;
    }
    tridiagonal_solve(&sub, &diag, &sup, &rhs)
}

/// Direct tridiagonal solve by forward elimination and back substitution.
///
/// `sub` and `sup` hold the off-diagonal bands (length one less than `diag`);
/// a zero or non-finite pivot reports the offending row.
pub fn tridiagonal_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::DimensionMismatch {
            context: "empty tridiagonal system",
        });
    }
    if sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            context: "tridiagonal band lengths disagree",
        });
    }
    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularSystem { index: 0 });
    }
    if n > 1 {
        c[0] = sup[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { index: i });
        }
        if i < n - 1 {
            c[i] = sup[i] / pivot;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

//! One-dimensional discrete-ordinates neutron transport on a slab, with
//! accelerated outer iterations and the matching analytic stability model.
//!
//! The crate solves the fixed-source S_N transport equation in slab geometry
//! by source iteration, optionally accelerated by a corrected low-order
//! (quasidiffusion-style) solve — either replacing the swept flux outright
//! (CQD) or spreading the correction over neighboring cells by linear
//! prolongation (lpCQD). A companion Fourier module evaluates the analytic
//! iteration symbols of all three schemes on the homogeneous model problem,
//! so predicted and measured convergence rates can be compared directly.
//!
//! Module map:
//! - [`problem`]: material regions, boundary conditions, mesh construction.
//! - [`quadrature`]: Gauss-Legendre angular quadrature sets.
//! - [`sweep`]: upwind transport sweeps and angular moments.
//! - [`low_order`]: correction factors and the tridiagonal low-order solve.
//! - [`iteration`]: outer iteration drivers, norms, and radius estimation.
//! - [`fourier`]: analytic symbols, frequency grids, spectral radii.

pub mod error;
pub mod fourier;
pub mod iteration;
pub mod low_order;
pub mod problem;
pub mod quadrature;
pub mod sweep;

pub use error::{Error, Result};
pub use fourier::{
    angle_coefficients, frequency_grid, rho_cqd, rho_cqd_dd, rho_lpcqd, rho_si, spectral_radius,
    spectral_radius_dense, symbols, BoundaryModel, FourierConfig, SymbolResult,
};
pub use iteration::{
    diff_norm, eq33_norm, estimate_spectral_radius, lp_update, measure_rho, measure_rho_with_quad,
    solve, IterationHistory, IterationOptions, RhoMeasurement, SchemeKind, Solution, Status,
};
pub use low_order::{
    assemble_and_solve, dhat_factors, eddington_factors, tridiagonal_solve, CorrectionFields,
    FLUX_FLOOR,
};
pub use problem::{
    build_mesh, build_mesh_nonuniform, BoundaryKind, BoundarySpec, MaterialRegion, Mesh,
};
pub use quadrature::{gauss_legendre, QuadratureSet, MAX_ORDER};
pub use sweep::{compute_moments, sc_alpha, transport_sweep, AngularSolution, Closure, Moments};

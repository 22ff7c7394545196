//! Outer iteration drivers: plain source iteration and its accelerated
//! variants.
//!
//! Each outer pass sweeps the transport equation with the lagged scattering
//! source, then either keeps the swept flux (SI), replaces it with the
//! corrected low-order solution (CQD), or blends the low-order correction
//! onto neighboring cells through a linear prolongation (lpCQD). The driver
//! records per-iteration difference norms, estimates the observed spectral
//! radius from late-iteration ratios, and classifies termination.

use crate::error::{Error, Result};
use crate::low_order::{assemble_and_solve, dhat_factors, eddington_factors};
use crate::problem::{build_mesh, BoundaryKind, BoundarySpec, MaterialRegion, Mesh};
use crate::quadrature::{gauss_legendre, QuadratureSet};
use crate::sweep::{compute_moments, transport_sweep, AngularSolution, Closure};

/// Which outer iteration scheme to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Plain source iteration.
    Si,
    /// Low-order replacement with consistency corrections.
    Cqd,
    /// Low-order correction spread by linear prolongation.
    LpCqd,
}

impl SchemeKind {
    /// Stable lowercase name used in CSV output and CLI arguments.
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::Si => "si",
            SchemeKind::Cqd => "cqd",
            SchemeKind::LpCqd => "lpcqd",
        }
    }
}

/// Knobs for the outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationOptions {
    /// Relative successive-difference threshold declaring convergence.
    pub tolerance: f64,
    /// Hard cap on outer iterations.
    pub max_iterations: usize,
    /// Weight on the boundary-cell correction at a vacuum edge in the
    /// prolongation update, in [0, 1].
    pub lp_boundary_alpha: f64,
    /// Consecutive iterations with an estimated radius above one required
    /// (together with growth off the running minimum) to declare divergence.
    pub divergence_window: usize,
    /// Starting scalar flux; zero everywhere when absent.
    pub initial_flux: Option<Vec<f64>>,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions {
            tolerance: 1e-10,
            max_iterations: 10_000,
            lp_boundary_alpha: 0.5,
            divergence_window: 10,
            initial_flux: None,
        }
    }
}

/// How an outer iteration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Relative successive difference fell below the tolerance.
    Converged,
    /// Iteration cap reached without convergence or divergence.
    MaxIterations,
    /// Sustained growth: estimated radius above one and differences well off
    /// their running minimum.
    Diverged,
    /// Acceleration needed a flux ratio but the swept flux was not positive.
    NegativeFluxAbort,
}

impl Status {
    /// Stable lowercase name used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::Diverged => "diverged",
            Status::NegativeFluxAbort => "negative_flux_abort",
        }
    }
}

/// Per-iteration instrumentation; all vectors share one entry per outer
/// iteration actually run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationHistory {
    /// Width-weighted L2 norm of the successive flux difference.
    pub diff_norms: Vec<f64>,
    /// Running late-window spectral-radius estimate, absent until enough
    /// iterations have accumulated.
    pub rho_estimates: Vec<Option<f64>>,
    /// Smallest cell-average flux in the iterate, for negativity tracking.
    pub min_flux: Vec<f64>,
}

/// Result of an outer iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Final per-cell scalar flux.
    pub phi: Vec<f64>,
    /// How the run terminated.
    pub status: Status,
    /// Outer iterations actually performed.
    pub iterations_used: usize,
    /// Per-iteration instrumentation.
    pub history: IterationHistory,
    /// Angular solution of the last transport sweep, usable to seed a
    /// restart's lagged reflective inflow.
    pub final_angular: Option<AngularSolution>,
}

/// Spectral-radius measurement summary from a driven run.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoMeasurement {
    /// Late-window estimate of the observed spectral radius, absent when the
    /// run ended too quickly to measure.
    pub rho: Option<f64>,
    /// Termination status of the underlying run.
    pub status: Status,
    /// Outer iterations used.
    pub iterations: usize,
}

/// Width-weighted root-mean-square of a cell field:
/// (sum h_j x_j^2 / sum h_j)^(1/2).
pub fn eq33_norm(x: &[f64], widths: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), widths.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for (v, h) in x.iter().zip(widths) {
        num += v * v * h;
        den += h;
    }
    (num / den).sqrt()
}

/// Width-weighted L2 norm of the difference of two cell fields.
pub fn diff_norm(phi_new: &[f64], phi_old: &[f64], widths: &[f64]) -> f64 {
    debug_assert_eq!(phi_new.len(), phi_old.len());
    debug_assert_eq!(phi_new.len(), widths.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for ((a, b), h) in phi_new.iter().zip(phi_old).zip(widths) {
        let d = a - b;
        num += d * d * h;
        den += h;
    }
    (num / den).sqrt()
}

/// Late-window spectral-radius estimate from successive difference norms.
///
/// Forms the per-iteration ratios d_l / d_{l-1}, keeps the ratios belonging
/// to the final five iterations while always excluding the first three
/// iterations of the run (transient rejection), and returns their median.
/// Needs at least five recorded iterations; ratios whose denominator is zero
/// are skipped.
pub fn estimate_spectral_radius(diff_norms: &[f64]) -> Option<f64> {
    let l = diff_norms.len();
    if l < 5 {
        return None;
    }
    let first = l.saturating_sub(4).max(4);
    let mut ratios: Vec<f64> = (first..=l)
        .filter(|&k| diff_norms[k - 2] > 0.0)
        .map(|k| diff_norms[k - 1] / diff_norms[k - 2])
        .collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    Some(if n % 2 == 1 {
        ratios[n / 2]
    } else {
        0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
    })
}

/// Spreads the low-order correction onto neighboring cells by a width-aware
/// linear prolongation and returns the updated flux.
///
/// Interior cells average the corrections interpolated to their two edges.
/// A reflective boundary reuses the boundary cell's correction for the ghost
/// cell; a vacuum boundary weights the boundary correction by `alpha`.
pub fn lp_update(
    phi_ho: &[f64],
    phi_lo: &[f64],
    mesh: &Mesh,
    boundary: BoundarySpec,
    alpha: f64,
) -> Result<Vec<f64>> {
    let nj = mesh.cell_count();
    if phi_ho.len() != nj || phi_lo.len() != nj {
        return Err(Error::DimensionMismatch {
            context: "flux length differs from mesh in prolongation",
        });
    }
    if nj < 2 {
        return Err(Error::TooFewCells { needed: 2, got: nj });
    }
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument {
            reason: format!("prolongation boundary weight {alpha} outside [0, 1]"),
        });
    }
    let h = mesh.widths();
    let delta: Vec<f64> = phi_lo.iter().zip(phi_ho).map(|(lo, ho)| lo - ho).collect();
    let mut out = vec![0.0; nj];
    for j in 1..nj - 1 {
        let left = h[j] / (h[j - 1] + h[j]);
        let center = h[j - 1] / (h[j - 1] + h[j]) + h[j + 1] / (h[j] + h[j + 1]);
        let right = h[j] / (h[j] + h[j + 1]);
        out[j] = phi_ho[j]
            + 0.5 * (left * delta[j - 1] + center * delta[j] + right * delta[j + 1]);
    }
    let frac_left = h[0] / (h[0] + h[1]);
    out[0] = phi_ho[0]
        + match boundary.left {
            BoundaryKind::Reflective => {
                0.5 * ((1.0 + h[1] / (h[0] + h[1])) * delta[0] + frac_left * delta[1])
            }
            BoundaryKind::Vacuum => 0.5 * ((alpha + frac_left) * delta[0] + frac_left * delta[1]),
        };
    let last = nj - 1;
    let frac_right = h[last] / (h[last] + h[last - 1]);
    out[last] = phi_ho[last]
        + match boundary.right {
            BoundaryKind::Reflective => {
                0.5 * ((1.0 + h[last - 1] / (h[last] + h[last - 1])) * delta[last]
                    + frac_right * delta[last - 1])
            }
            BoundaryKind::Vacuum => {
                0.5 * ((alpha + frac_right) * delta[last] + frac_right * delta[last - 1])
            }
        };
    Ok(out)
}

fn validate_options(opts: &IterationOptions, cells: usize) -> Result<()> {
    if !(opts.tolerance > 0.0) || !opts.tolerance.is_finite() {
        return Err(Error::InvalidArgument {
            reason: format!("tolerance {} must be positive and finite", opts.tolerance),
        });
    }
    if opts.max_iterations == 0 {
        return Err(Error::InvalidArgument {
            reason: "max_iterations must be at least 1".into(),
        });
    }
    if opts.divergence_window == 0 {
        return Err(Error::InvalidArgument {
            reason: "divergence_window must be at least 1".into(),
        });
    }
    if !opts.lp_boundary_alpha.is_finite() || !(0.0..=1.0).contains(&opts.lp_boundary_alpha) {
        return Err(Error::InvalidArgument {
            reason: format!(
                "prolongation boundary weight {} outside [0, 1]",
                opts.lp_boundary_alpha
            ),
        });
    }
    if let Some(init) = &opts.initial_flux {
        if init.len() != cells {
            return Err(Error::DimensionMismatch {
                context: "initial flux length differs from mesh",
            });
        }
    }
    Ok(())
}

/// Runs the outer iteration for the chosen scheme until convergence,
/// divergence, a flux-positivity abort, or the iteration cap.
///
/// Convergence compares the width-weighted successive-difference norm
/// against `tolerance` relative to the same norm of the new iterate.
/// Divergence requires the running radius estimate to sit above one for
/// `divergence_window` consecutive iterations while the difference norm
/// exceeds ten times its running minimum.
pub fn solve(
    scheme: SchemeKind,
    mesh: &Mesh,
    quad: &QuadratureSet,
    closure: Closure,
    opts: &IterationOptions,
) -> Result<Solution> {
    let nj = mesh.cell_count();
    validate_options(opts, nj)?;
    let widths = mesh.widths();
    let mut phi = opts
        .initial_flux
        .clone()
        .unwrap_or_else(|| vec![0.0; nj]);
    let mut previous: Option<AngularSolution> = None;
    let mut history = IterationHistory::default();
    let mut min_diff = f64::INFINITY;
    let mut above_one = 0usize;

    for iter in 1..=opts.max_iterations {
        let sweep = transport_sweep(mesh, quad, closure, &phi, previous.as_ref())?;
        let moments = compute_moments(&sweep, quad);
        let phi_next = match scheme {
            SchemeKind::Si => moments.phi.clone(),
            SchemeKind::Cqd | SchemeKind::LpCqd => {
                let lo = eddington_factors(&moments)
                    .and_then(|e| dhat_factors(&moments, mesh, e))
                    .and_then(|corr| assemble_and_solve(mesh, &corr));
                match lo {
                    Ok(lo) => {
                        if scheme == SchemeKind::Cqd {
                            lo
                        } else {
                            lp_update(
                                &moments.phi,
                                &lo,
                                mesh,
                                mesh.boundary(),
                                opts.lp_boundary_alpha,
                            )?
                        }
                    }
                    Err(Error::NonPositiveFlux { .. }) => {
                        let d = diff_norm(&moments.phi, &phi, widths);
                        history.diff_norms.push(d);
                        history
                            .rho_estimates
                            .push(estimate_spectral_radius(&history.diff_norms));
                        history
                            .min_flux
                            .push(moments.phi.iter().copied().fold(f64::INFINITY, f64::min));
                        return Ok(Solution {
                            phi: moments.phi,
                            status: Status::NegativeFluxAbort,
                            iterations_used: iter,
                            history,
                            final_angular: Some(sweep),
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        let d = diff_norm(&phi_next, &phi, widths);
        let scale = eq33_norm(&phi_next, widths).max(1e-300);
        history.diff_norms.push(d);
        let estimate = estimate_spectral_radius(&history.diff_norms);
        history.rho_estimates.push(estimate);
        history
            .min_flux
            .push(phi_next.iter().copied().fold(f64::INFINITY, f64::min));
        match estimate {
            Some(r) if r > 1.0 => above_one += 1,
            _ => above_one = 0,
        }
        let grew = d > 10.0 * min_diff;
        min_diff = min_diff.min(d);
        phi = phi_next;
        previous = Some(sweep);
        if d / scale < opts.tolerance {
            return Ok(Solution {
                phi,
                status: Status::Converged,
                iterations_used: iter,
                history,
                final_angular: previous,
            });
        }
        if above_one >= opts.divergence_window && grew {
            return Ok(Solution {
                phi,
                status: Status::Diverged,
                iterations_used: iter,
                history,
                final_angular: previous,
            });
        }
    }
    Ok(Solution {
        phi,
        status: Status::MaxIterations,
        iterations_used: opts.max_iterations,
        history,
        final_angular: previous,
    })
}

/// Runs the standard measurement problem — a homogeneous 100h-style slab,
/// reflective on the left and vacuum on the right, with unit total cross
/// section and unit source — and reports the observed spectral radius.
pub fn measure_rho_with_quad(
    scheme: SchemeKind,
    c: f64,
    sigma_t_h: f64,
    cells: usize,
    closure: Closure,
    quad: &QuadratureSet,
    opts: &IterationOptions,
) -> Result<RhoMeasurement> {
    if !(0.0..=1.0).contains(&c) || !c.is_finite() {
        return Err(Error::InvalidArgument {
            reason: format!("scattering ratio {c} outside [0, 1]"),
        });
    }
    if !(sigma_t_h > 0.0) || !sigma_t_h.is_finite() {
        return Err(Error::InvalidArgument {
            reason: format!("optical cell width {sigma_t_h} must be positive"),
        });
    }
    if cells == 0 {
        return Err(Error::TooFewCells { needed: 1, got: 0 });
    }
    let h = sigma_t_h;
    let regions = [MaterialRegion {
        width: cells as f64 * h,
        sigma_t: 1.0,
        sigma_s: c,
        q: 1.0,
    }];
    let boundary = BoundarySpec {
        left: BoundaryKind::Reflective,
        right: BoundaryKind::Vacuum,
    };
    let mesh = build_mesh(&regions, boundary, h)?;
    let sol = solve(scheme, &mesh, quad, closure, opts)?;
    Ok(RhoMeasurement {
        rho: estimate_spectral_radius(&sol.history.diff_norms),
        status: sol.status,
        iterations: sol.iterations_used,
    })
}

/// [`measure_rho_with_quad`] with the standard order-10 quadrature.
pub fn measure_rho(
    scheme: SchemeKind,
    c: f64,
    sigma_t_h: f64,
    cells: usize,
    closure: Closure,
    opts: &IterationOptions,
) -> Result<RhoMeasurement> {
    let quad = gauss_legendre(10)?;
    measure_rho_with_quad(scheme, c, sigma_t_h, cells, closure, &quad, opts)
}

//! Analytic iteration symbols and spectral radii for the homogeneous
//! uniform-mesh model problem.
//!
//! For a single Fourier mode of frequency ω, each outer iteration multiplies
//! the flux perturbation by a complex symbol: a quadrature sum for plain
//! source iteration, that sum minus a low-order correction quotient for the
//! accelerated scheme, and a cosine-weighted blend of the two for the
//! prolongation variant. Symbols are evaluated in pole-free half-angle form,
//! so frequencies where the tangent-based textbook expressions blow up are
//! handled continuously. The predicted spectral radius is the maximum
//! symbol magnitude over a discrete frequency grid set by the slab length,
//! with an optional dense grid for verification scans.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::iteration::SchemeKind;
use crate::quadrature::QuadratureSet;
use crate::sweep::Closure;

/// Which boundary picture sets the frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryModel {
    /// Periodic slab: ω_s = 2πs / (Σ_t L), s = 1..J.
    Periodic,
    /// Reflective slab: the periodic frequencies halved.
    Reflective,
}

/// Parameters of the homogeneous model problem under analysis.
#[derive(Debug, Clone)]
pub struct FourierConfig {
    c: f64,
    sigma_t: f64,
    h: f64,
    cells: usize,
    quad: QuadratureSet,
    closure: Closure,
    boundary_model: BoundaryModel,
}

impl FourierConfig {
    /// Validates and bundles the model parameters; `cells` is the frequency
    /// count J and fixes the slab length L = J·h.
    pub fn new(
        c: f64,
        sigma_t: f64,
        h: f64,
        cells: usize,
        quad: QuadratureSet,
        closure: Closure,
        boundary_model: BoundaryModel,
    ) -> Result<Self> {
        if !c.is_finite() || !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidArgument {
                reason: format!("scattering ratio {c} outside [0, 1]"),
            });
        }
        if !(sigma_t > 0.0) || !sigma_t.is_finite() {
            return Err(Error::InvalidArgument {
                reason: format!("total cross section {sigma_t} must be positive"),
            });
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidArgument {
                reason: format!("cell width {h} must be positive"),
            });
        }
        if cells == 0 {
            return Err(Error::TooFewCells { needed: 1, got: 0 });
        }
        Ok(FourierConfig {
            c,
            sigma_t,
            h,
            cells,
            quad,
            closure,
            boundary_model,
        })
    }

    /// Scattering ratio.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Total cross section.
    pub fn sigma_t(&self) -> f64 {
        self.sigma_t
    }

    /// Cell width.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Frequency count J (also the cell count of the modeled slab).
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Quadrature set.
    pub fn quad(&self) -> &QuadratureSet {
        &self.quad
    }

    /// Spatial closure.
    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Boundary picture for the frequency grid.
    pub fn boundary_model(&self) -> BoundaryModel {
        self.boundary_model
    }

    /// Absorption cross section Σ_t (1 − c).
    pub fn sigma_a(&self) -> f64 {
        self.sigma_t * (1.0 - self.c)
    }

    /// Optical cell width Σ_t h.
    pub fn optical_width(&self) -> f64 {
        self.sigma_t * self.h
    }

    /// Half-angle Σ_t h ω / 2 of a frequency.
    fn theta(&self, omega: f64) -> f64 {
        0.5 * self.sigma_t * self.h * omega
    }

    /// Signed closure weight for direction `n`.
    fn alpha(&self, n: usize) -> f64 {
        self.closure.weight(self.sigma_t * self.h / self.quad.mu()[n])
    }
}

/// All three iteration symbols at one frequency, with the per-angle
/// coefficients kept for diagnostics.
#[derive(Debug, Clone)]
pub struct SymbolResult {
    /// Frequency ω.
    pub omega: f64,
    /// Source-iteration symbol.
    pub rho_si: Complex64,
    /// Accelerated-scheme symbol.
    pub rho_cqd: Complex64,
    /// Prolongation-variant symbol.
    pub rho_lpcqd: Complex64,
    /// Per-angle flux coefficients a_n.
    pub a: Vec<Complex64>,
    /// Per-angle edge coefficients b_n.
    pub b: Vec<Complex64>,
}

/// Per-angle coefficients (a_n, b_n) of the swept angular perturbation.
///
/// In half-angle form with θ = Σ_t hω/2 and k_n = α_n + 2μ_n/(Σ_t h):
/// a_n = (c/2)(cos θ + i α_n sin θ)/(cos θ + i k_n sin θ) and
/// b_n = (c/2)/(cos θ + i k_n sin θ). Both stay finite at every real ω.
pub fn angle_coefficients(omega: f64, cfg: &FourierConfig) -> (Vec<Complex64>, Vec<Complex64>) {
    let theta = cfg.theta(omega);
    let (sin_t, cos_t) = theta.sin_cos();
    let half_c = 0.5 * cfg.c;
    let inv_optical = 2.0 / cfg.optical_width();
    let n_angles = cfg.quad.order();
    let mut a = Vec::with_capacity(n_angles);
    let mut b = Vec::with_capacity(n_angles);
    for n in 0..n_angles {
        let mu = cfg.quad.mu()[n];
        let alpha = cfg.alpha(n);
        let k = alpha + mu * inv_optical;
        let denom = Complex64::new(cos_t, k * sin_t);
        a.push(Complex64::new(cos_t, alpha * sin_t) * half_c / denom);
        b.push(Complex64::new(half_c, 0.0) / denom);
    }
    (a, b)
}

/// Source-iteration symbol: the weighted angle sum of the a_n.
pub fn rho_si(omega: f64, cfg: &FourierConfig) -> Complex64 {
    let (a, _) = angle_coefficients(omega, cfg);
    weighted_sum(&a, cfg.quad.weights())
}

fn weighted_sum(values: &[Complex64], weights: &[f64]) -> Complex64 {
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| v * w)
        .sum()
}

/// ω → 0 limit of the accelerated symbol when the correction quotient is
/// 0/0 (zero absorption): ϱ_SI − (3 Σ_t h c / 4) Σ_n μ_n w_n k_n.
fn cqd_zero_frequency_limit(cfg: &FourierConfig, si: Complex64) -> Complex64 {
    let inv_optical = 2.0 / cfg.optical_width();
    let mut s = 0.0;
    for n in 0..cfg.quad.order() {
        let mu = cfg.quad.mu()[n];
        let k = cfg.alpha(n) + mu * inv_optical;
        s += mu * cfg.quad.weights()[n] * k;
    }
    si - 0.75 * cfg.optical_width() * cfg.c * s
}

fn rho_cqd_from_parts(
    omega: f64,
    cfg: &FourierConfig,
    si: Complex64,
    b: &[Complex64],
) -> Complex64 {
    let theta = cfg.theta(omega);
    let (sin_t, _) = theta.sin_cos();
    // 1 − cos(Σ_t hω) written as 2 sin²θ: exact identity, and numerically
    // sound arbitrarily close to the tangent poles.
    let den = (2.0 / (3.0 * cfg.sigma_t)) * 2.0 * sin_t * sin_t + cfg.h * cfg.h * cfg.sigma_a();
    if den == 0.0 {
        return cqd_zero_frequency_limit(cfg, si);
    }
    let mut s_b = Complex64::new(0.0, 0.0);
    for n in 0..cfg.quad.order() {
        s_b += b[n] * (cfg.quad.mu()[n] * cfg.quad.weights()[n]);
    }
    let num = Complex64::new(0.0, 2.0 * cfg.h * sin_t) * s_b
        + cfg.h * cfg.h * cfg.sigma_a() * si;
    si - num / den
}

/// Accelerated-scheme symbol: ϱ_SI minus the low-order correction quotient.
pub fn rho_cqd(omega: f64, cfg: &FourierConfig) -> Complex64 {
    let (a, b) = angle_coefficients(omega, cfg);
    let si = weighted_sum(&a, cfg.quad.weights());
    rho_cqd_from_parts(omega, cfg, si, &b)
}

/// Diamond-difference shortcut for the accelerated symbol, algebraically
/// equal to [`rho_cqd`] when the closure is the diamond rule; kept as an
/// independent cross-check path.
pub fn rho_cqd_dd(omega: f64, cfg: &FourierConfig) -> Result<Complex64> {
    if cfg.closure != Closure::DiamondDifference {
        return Err(Error::RequiresDiamondDifference);
    }
    let (a, _) = angle_coefficients(omega, cfg);
    let si = weighted_sum(&a, cfg.quad.weights());
    let theta = cfg.theta(omega);
    let (sin_t, cos_t) = theta.sin_cos();
    let den = (2.0 / (3.0 * cfg.sigma_t)) * 2.0 * sin_t * sin_t + cfg.h * cfg.h * cfg.sigma_a();
    if den == 0.0 {
        return Ok(cqd_zero_frequency_limit(cfg, si));
    }
    let inv_optical = 2.0 / cfg.optical_width();
    let mut t1 = 0.0;
    for n in 0..cfg.quad.order() {
        let mu = cfg.quad.mu()[n];
        let k = mu * inv_optical;
        t1 += cfg.quad.weights()[n] * mu * mu / (cos_t * cos_t + k * k * sin_t * sin_t);
    }
    t1 *= cfg.h * cfg.c * inv_optical * sin_t * sin_t;
    let num = t1 + cfg.h * cfg.h * cfg.sigma_a() * si;
    Ok(si - num / den)
}

/// Prolongation-variant symbol: ϱ_SI + ½(1 + cos(Σ_t hω))(ϱ_CQD − ϱ_SI).
pub fn rho_lpcqd(omega: f64, cfg: &FourierConfig) -> Complex64 {
    let s = symbols(omega, cfg);
    s.rho_lpcqd
}

/// Evaluates all three symbols at one frequency, sharing the per-angle
/// coefficients.
pub fn symbols(omega: f64, cfg: &FourierConfig) -> SymbolResult {
    let (a, b) = angle_coefficients(omega, cfg);
    let si = weighted_sum(&a, cfg.quad.weights());
    let cqd = rho_cqd_from_parts(omega, cfg, si, &b);
    let theta = cfg.theta(omega);
    let weight = 0.5 * (1.0 + (2.0 * theta).cos());
    let lp = si + weight * (cqd - si);
    SymbolResult {
        omega,
        rho_si: si,
        rho_cqd: cqd,
        rho_lpcqd: lp,
        a,
        b,
    }
}

/// Discrete frequency grid ω_s for s = 1..J: 2πs/(Σ_t L) for the periodic
/// model, halved for the reflective model, with L = J·h.
pub fn frequency_grid(cfg: &FourierConfig) -> Vec<f64> {
    let length = cfg.h * cfg.cells as f64;
    let scale = match cfg.boundary_model {
        BoundaryModel::Periodic => 2.0,
        BoundaryModel::Reflective => 1.0,
    };
    (1..=cfg.cells)
        .map(|s| scale * std::f64::consts::PI * s as f64 / (cfg.sigma_t * length))
        .collect()
}

fn scheme_magnitude(s: &SymbolResult, scheme: SchemeKind) -> f64 {
    match scheme {
        SchemeKind::Si => s.rho_si.norm(),
        SchemeKind::Cqd => s.rho_cqd.norm(),
        SchemeKind::LpCqd => s.rho_lpcqd.norm(),
    }
}

fn max_over(cfg: &FourierConfig, scheme: SchemeKind, omegas: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut best = (0.0f64, 0.0f64);
    let mut first = true;
    for omega in omegas {
        let mag = scheme_magnitude(&symbols(omega, cfg), scheme);
        if first || mag > best.0 {
            best = (mag, omega);
            first = false;
        }
    }
    best
}

/// Predicted spectral radius: the maximum symbol magnitude over the discrete
/// frequency grid. Returns (radius, attaining frequency).
pub fn spectral_radius(cfg: &FourierConfig, scheme: SchemeKind) -> (f64, f64) {
    max_over(cfg, scheme, frequency_grid(cfg).into_iter())
}

/// Spectral radius over `n` uniform frequencies spanning (0, 2π/(Σ_t h)]
/// instead of the discrete grid; used for verification scans.
pub fn spectral_radius_dense(
    cfg: &FourierConfig,
    scheme: SchemeKind,
    n: usize,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            reason: "dense scan needs at least one frequency".into(),
        });
    }
    let omega_max = 2.0 * std::f64::consts::PI / cfg.optical_width();
    let step = omega_max / n as f64;
    Ok(max_over(cfg, scheme, (1..=n).map(|i| i as f64 * step)))
}

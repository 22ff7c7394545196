//! Error type shared by mesh construction, sweeps, acceleration, and the
//! analytic symbol evaluation.

use thiserror::Error;

/// Everything that can go wrong inside the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Quadrature orders must be even and within the supported range.
    #[error("quadrature order {order} is not an even integer in 2..=64")]
    InvalidQuadratureOrder { order: usize },
    /// Region data failed validation (non-positive width, negative cross
    /// sections or source, or scattering exceeding the total).
    #[error("region {region}: {reason}")]
    InvalidRegion { region: usize, reason: String },
    /// A region boundary does not land on a cell edge.
    #[error("region {region} boundary does not align with a cell edge")]
    MisalignedRegion { region: usize },
    /// The operation requires more cells than the mesh provides.
    #[error("operation needs at least {needed} cells, mesh has {got}")]
    TooFewCells { needed: usize, got: usize },
    /// The step-characteristic closure weight is undefined at zero optical
    /// depth; the diamond closure covers that limit.
    #[error("step-characteristic closure weight is undefined at tau = 0")]
    ZeroTau,
    /// Scalar flux at or below the floor where the acceleration divides by it.
    #[error("non-positive scalar flux in cell {cell} blocks the acceleration update")]
    NonPositiveFlux { cell: usize },
    /// The tridiagonal solve hit a zero or non-finite pivot.
    #[error("singular low-order system: unusable pivot at row {index}")]
    SingularSystem { index: usize },
    /// Mismatched array lengths passed to a numerical kernel.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },
    /// A scalar argument or configuration value failed validation.
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
    /// The diamond-difference-only shortcut was invoked with another closure.
    #[error("operation requires the diamond-difference closure")]
    RequiresDiamondDifference,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

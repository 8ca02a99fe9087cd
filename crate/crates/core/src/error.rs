use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:.3e})")]
    NonUnitaryInput { deviation: f64 },

    #[error("vector norm {norm:.3e} is too small to define a direction")]
    ZeroVector { norm: f64 },

    #[error("matrix is not a rank-1 projector (defect {defect:.3e})")]
    NotAProjector { defect: f64 },

    #[error("initial Bloch vector does not project onto the first director (distance {distance:.3e})")]
    StartMismatch { distance: f64 },

    #[error("adjacent directors at samples {index} and {} are nearly orthogonal (|overlap| = {overlap:.3e}); refine the sampling", index + 1)]
    StepTooLarge { index: usize, overlap: f64 },

    #[error("lift is ambiguous at sample {index} (|overlap| = {overlap:.3e})")]
    LiftAmbiguous { index: usize, overlap: f64 },

    #[error("path is not closed")]
    NotClosed,

    #[error("lifted endpoint is near neither +a0 nor -a0 (defect {defect:.3e})")]
    EndpointUnresolved { defect: f64 },

    #[error("path endpoints do not match (distance {distance:.3e})")]
    EndpointMismatch { distance: f64 },

    #[error("spectrum is degenerate at lambda = {lambda}")]
    DegeneracyOnPath { lambda: f64 },

    #[error("time step too coarse: |H| dt = {product:.3e} at t = {time} (limit 0.1)")]
    StepTooCoarse { product: f64, time: f64 },

    #[error("{name} must be positive (got {value})")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("evolution record and reference path are sampled on incompatible grids: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, HolonomyError>;

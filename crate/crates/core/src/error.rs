use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be non-negative, got {value}")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid Rydberg quantum numbers n={n}, q={q}, m={m}")]
    InvalidQuantumNumbers { n: i64, q: i64, m: i64 },

    #[error("dipole-dipole potential evaluated at zero separation")]
    ZeroSeparation,

    #[error("computed group velocity {velocity} m/s is not below c")]
    ComputedVelocityExceedsC { velocity: f64 },

    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {subdivisions} subdivisions")]
    QuadratureNonConvergence {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("grid spacing {spacing:e} m exceeds w/4 = {limit:e} m")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("time {t:e} s exceeds the exit time {t_out:e} s")]
    PulseLeftMedium { t: f64, t_out: f64 },

    #[error("signal envelope varies by {variation:.3} of its peak over one width w (limit 0.1)")]
    EnvelopeTooSharp { variation: f64 },

    #[error("envelope normalization is {value}, expected 1")]
    NotNormalized { value: f64 },

    #[error("phase wrap: phi12 * n_max = {product} exceeds pi")]
    PhaseWrapInfeasible { product: f64 },

    #[error("mixing angles differ: sin^2 theta = {first} vs {second}")]
    MixingAngleMismatch { first: f64, second: f64 },

    #[error("{0}")]
    Parse(String),

    #[error("{failed} constraint(s) failed")]
    ConstraintFailure { failed: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeInput { name, value })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}

//! Independent numerical checks of every closed form.
//!
//! Singular two-point kernels are regularized either by an imaginary time
//! shift (`iε`) or, for the `δ'` pieces, by a Gaussian nascent distribution,
//! evaluated for a decreasing regulator schedule and extrapolated to zero.
//! The smooth integral representations of I2 and I4 need no regulator.

mod extrapolate;
mod integrals;
mod kernels;
mod quad;
mod suite;

pub use extrapolate::{extrapolate, neville_at_zero, RegulatorSchedule};
pub use integrals::*;
pub use kernels::{
    nascent_delta_prime, regularized_interval, wightman, wightman_gw, wightman_minkowski, EpsilonConvention,
};
pub use quad::{gaussian_tail_radius, integrate, quad_adaptive, QuadOptions, QuadResult};
pub use suite::{
    relative_deviation, run_check, verify_suite, verify_suite_with, CheckRecord, Quantity, VerifyGrid, VerifyReport,
    VerifySummary, SMOOTH_TOLERANCE_RATIO,
};

use crate::model::ModelError;
use num_complex::Complex64;
use thiserror::Error;

/// Result of one oracle evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    /// Regulator values used, empty for regulator-free oracles.
    pub regulator_schedule: Vec<f64>,
    /// Value at each regulator, before extrapolation.
    pub sequence: Vec<Complex64>,
    /// `abs_error_estimate <= tolerance`.
    pub converged: bool,
    /// Absolute threshold: requested relative tolerance times `|value|`.
    pub tolerance: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("NoConvergence: quadrature stopped at {value} with error estimate {abs_error:e} after {evaluations} evaluations")]
    NoConvergence { value: Complex64, abs_error: f64, evaluations: usize },
    #[error("invalid integration range [{a}, {b}]")]
    InvalidRange { a: f64, b: f64 },
    #[error("invalid regulator schedule {values:?} for extrapolation order {extrapolation_order}")]
    InvalidSchedule { values: Vec<f64>, extrapolation_order: usize },
    #[error("oracle needs omega_sigma > 0, got {omega_sigma}")]
    InvalidFrequency { omega_sigma: f64 },
    #[error(
        "SignConventionMismatch: {quantity} oracle gives {oracle} under {convention:?}, closed form {closed} (flipped convention agrees: {flipped_agrees})"
    )]
    SignConventionMismatch {
        quantity: &'static str,
        closed: Complex64,
        oracle: Complex64,
        convention: EpsilonConvention,
        flipped_agrees: bool,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

//! Regularized Wightman kernels and nascent distributions.

use crate::model::{geodesic_interval, SpacetimePoint};
use crate::specfun::sinc;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Orientation of the imaginary time shift in the two-point function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonConvention {
    /// `dt -> dt - i eps` with `dt = t(first) - t(second)`.
    #[default]
    Standard,
    /// `dt -> dt + i eps`.
    Flipped,
}

impl EpsilonConvention {
    pub fn shift(self) -> f64 {
        match self {
            EpsilonConvention::Standard => -1.0,
            EpsilonConvention::Flipped => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            EpsilonConvention::Standard => EpsilonConvention::Flipped,
            EpsilonConvention::Flipped => EpsilonConvention::Standard,
        }
    }
}

/// Squared interval with the time difference shifted into the complex plane.
pub fn regularized_interval(x: SpacetimePoint, xp: SpacetimePoint, eps: f64, conv: EpsilonConvention) -> Complex64 {
    let dt = Complex64::new(x.t - xp.t, conv.shift() * eps);
    let real_part = geodesic_interval(x, xp) + (x.t - xp.t).powi(2);
    real_part - dt * dt
}

/// Minkowski vacuum two-point function `1 / (4 pi^2 sigma_eps)`.
pub fn wightman_minkowski(x: SpacetimePoint, xp: SpacetimePoint, eps: f64, conv: EpsilonConvention) -> Complex64 {
    1.0 / (4.0 * PI * PI * regularized_interval(x, xp, eps, conv))
}

/// First-order correction per unit amplitude for a + polarized wave of
/// frequency `omega` travelling along z.
pub fn wightman_gw(x: SpacetimePoint, xp: SpacetimePoint, omega: f64, eps: f64, conv: EpsilonConvention) -> Complex64 {
    let du = x.u() - xp.u();
    let transverse = (x.x - xp.x).powi(2) - (x.y - xp.y).powi(2);
    if transverse == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = regularized_interval(x, xp, eps, conv);
    let envelope = sinc(0.5 * omega * du) * (0.5 * omega * (x.u() + xp.u())).cos();
    -envelope * transverse / (4.0 * PI * PI * s * s)
}

/// Full two-point function `W_M + A W_GW`.
pub fn wightman(
    x: SpacetimePoint,
    xp: SpacetimePoint,
    amplitude: f64,
    omega: f64,
    eps: f64,
    conv: EpsilonConvention,
) -> Complex64 {
    let mut w = wightman_minkowski(x, xp, eps, conv);
    if amplitude != 0.0 {
        w += amplitude * wightman_gw(x, xp, omega, eps, conv);
    }
    w
}

/// Derivative of a Gaussian nascent delta of width `eta`.
pub fn nascent_delta_prime(x: f64, eta: f64) -> f64 {
    let q = x / eta;
    if q.abs() > 40.0 {
        return 0.0;
    }
    -q / (eta * eta) * (-0.5 * q * q).exp() / (2.0 * PI).sqrt()
}

//! First-order gravitational-wave corrections to X and C.
//!
//! The four auxiliary integrals I1..I4 carry an explicit 1/omega. Below
//! [`SMALL_OMEGA`] I1 and I3 switch to their Taylor polynomials and I2, I4 are
//! extrapolated from two nearby frequencies.

use crate::model::{check_geometry, DetectorParams, DimensionlessParams, ModelError, PairGeometry, SeparationAxis};
use crate::specfun::{erf_real, scaled_erf_product, ComplexValue};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const SMALL_OMEGA: f64 = 1e-3;
/// Frequencies used for the small-omega extrapolation of I2 and I4.
const RICHARDSON_NODES: (f64, f64) = (1e-2, 5e-3);

fn scaled(p: f64, z: Complex64) -> Complex64 {
    // callers always pass Im z = p, which cannot overflow
    scaled_erf_product(p, z).expect("scaled erf product in range")
}

/// Fits `F0 + F2 w^2` through the two nodes and evaluates it at `omega`.
fn even_extrapolation(omega: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (w1, w2) = RICHARDSON_NODES;
    let (f1, f2) = (f(w1), f(w2));
    let f2_coeff = (f1 - f2) / (w1 * w1 - w2 * w2);
    let f0 = f2 - f2_coeff * w2 * w2;
    f0 + f2_coeff * omega * omega
}

/// `f = exp(-(w-2G)^2/4 + i t0 (w-2G)) + exp(-(w+2G)^2/4 - i t0 (w+2G))`.
pub fn f_envelope(omega_sigma: f64, det: &DetectorParams) -> ComplexValue {
    let w = omega_sigma;
    let g = det.gap_omega_sigma;
    let t0 = det.t0_sigma;
    let minus = w - 2.0 * g;
    let plus = w + 2.0 * g;
    Complex64::from_polar((-0.25 * minus * minus).exp(), t0 * minus)
        + Complex64::from_polar((-0.25 * plus * plus).exp(), -t0 * plus)
}

/// The same envelope written as `2 exp(-w^2/4 - G^2 - 2i t0 G) cosh(w G + i t0 w)`.
pub fn f_envelope_cosh(omega_sigma: f64, det: &DetectorParams) -> ComplexValue {
    let w = omega_sigma;
    let g = det.gap_omega_sigma;
    let t0 = det.t0_sigma;
    let pre = Complex64::from_polar(2.0 * (-0.25 * w * w - g * g).exp(), -2.0 * t0 * g);
    pre * Complex64::new(w * g, t0 * w).cosh()
}

fn i1_raw(w: f64, d: f64) -> f64 {
    let e = (-0.25 * d * d).exp();
    if w < SMALL_OMEGA {
        let (d2, d3) = (d * d, d * d * d);
        let (d5, d7) = (d3 * d2, d3 * d2 * d2);
        let w2 = w * w;
        return PI * e * (d3 / 8.0 + d / 4.0 + w2 * (d3 / 96.0 - d5 / 192.0) + w2 * w2 * (d7 / 15360.0 - d5 / 2560.0));
    }
    let half = 0.5 * w * d;
    PI * e / w * ((0.25 * d * d + 1.0) * half.sin() - 0.25 * d * w * half.cos())
}

fn i2_closed(w: f64, d: f64) -> f64 {
    let half_d = 0.5 * d;
    let z = Complex64::new(0.5 * w, half_d);
    let poly = Complex64::new(1.0 + 0.25 * d * d, -0.25 * d * w);
    let term = (Complex64::from_polar(1.0, 0.5 * w * d) * poly * scaled(half_d, z)).re;
    PI / w * (erf_real(0.5 * w) - term)
}

fn i3_raw(w: f64, g: f64, d: f64) -> f64 {
    let e = (-0.25 * d * d).exp();
    let (s, c) = (g * d).sin_cos();
    if w < SMALL_OMEGA {
        let d2 = d * d;
        let core = d2 * s - 2.0 * d * g * c;
        let c0 = -d * (core + 2.0 * s) / 4.0;
        let c2 = d * d2 * (core - 2.0 * s) / 96.0;
        let c4 = -d * d2 * d2 * (core - 6.0 * s) / 7680.0;
        let w2 = w * w;
        return PI * e * (c0 + w2 * (c2 + w2 * c4));
    }
    let (sh, ch) = (0.5 * w * d).sin_cos();
    PI * e / (2.0 * w) * (d * w * s * ch + 2.0 * d * g * c * sh - (d * d + 4.0) * s * sh)
}

fn i4_closed(w: f64, g: f64, d: f64) -> f64 {
    let half_d = 0.5 * d;
    let mut bracket = 0.0;
    for sign in [1.0, -1.0] {
        let k = 0.5 * w + sign * g;
        let q = -Complex64::i() * Complex64::from_polar(1.0, d * k) * scaled(half_d, Complex64::new(k, half_d));
        let r = Complex64::new(half_d * k, 1.0 + 0.25 * d * d);
        bracket += (q * r).re;
    }
    PI / w * (erf_real(0.5 * w - g) + erf_real(0.5 * w + g) - bracket)
}

fn i2_raw(w: f64, d: f64) -> f64 {
    if w < SMALL_OMEGA {
        even_extrapolation(w, |x| i2_closed(x, d))
    } else {
        i2_closed(w, d)
    }
}

fn i4_raw(w: f64, g: f64, d: f64) -> f64 {
    if w < SMALL_OMEGA {
        even_extrapolation(w, |x| i4_closed(x, g, d))
    } else {
        i4_closed(w, g, d)
    }
}

/// I1, purely imaginary.
pub fn integral_i1(omega_sigma: f64, pair: &PairGeometry) -> Result<ComplexValue, ModelError> {
    check_geometry(pair)?;
    Ok(Complex64::new(0.0, i1_raw(omega_sigma.abs(), pair.d_sigma)))
}

/// I2, real.
pub fn integral_i2(omega_sigma: f64, pair: &PairGeometry) -> Result<ComplexValue, ModelError> {
    check_geometry(pair)?;
    Ok(Complex64::new(i2_raw(omega_sigma.abs(), pair.d_sigma), 0.0))
}

/// I3. Odd in the gap: flipping the sign of Omega flips the sign of I3.
pub fn integral_i3(omega_sigma: f64, det: &DetectorParams, pair: &PairGeometry) -> Result<f64, ModelError> {
    check_geometry(pair)?;
    Ok(i3_raw(omega_sigma.abs(), det.gap_omega_sigma, pair.d_sigma))
}

/// I4. Even in the gap.
pub fn integral_i4(omega_sigma: f64, det: &DetectorParams, pair: &PairGeometry) -> Result<f64, ModelError> {
    check_geometry(pair)?;
    Ok(i4_raw(omega_sigma.abs(), det.gap_omega_sigma, pair.d_sigma))
}

fn axis_sign(pair: &PairGeometry) -> f64 {
    match pair.axis {
        SeparationAxis::X => 1.0,
        SeparationAxis::Y => -1.0,
    }
}

fn gw_prefactor(d: f64) -> f64 {
    1.0 / (4.0 * d * d * PI.powf(1.5))
}

/// `X_GW / (A lambda^2) = f (I1 + I2) / (4 D^2 pi^(3/2))`.
pub fn x_gw(p: &DimensionlessParams) -> Result<ComplexValue, ModelError> {
    let w = p.gw.omega_sigma.abs();
    let sum = integral_i1(w, &p.pair)? + integral_i2(w, &p.pair)?;
    let value = axis_sign(&p.pair) * gw_prefactor(p.pair.d_sigma) * f_envelope(w, &p.detector) * sum;
    #[cfg(feature = "verify-identities")]
    {
        let other = x_gw_cosh_form(p)?;
        let scale = value.norm().max(other.norm());
        debug_assert!(
            (value - other).norm() <= 1e-12 * scale || scale < f64::MIN_POSITIVE,
            "envelope identity broken at {p:?}: {value} vs {other}"
        );
    }
    Ok(value)
}

/// [`x_gw`] assembled with [`f_envelope_cosh`] instead of [`f_envelope`].
pub fn x_gw_cosh_form(p: &DimensionlessParams) -> Result<ComplexValue, ModelError> {
    let w = p.gw.omega_sigma.abs();
    let sum = integral_i1(w, &p.pair)? + integral_i2(w, &p.pair)?;
    Ok(axis_sign(&p.pair) * gw_prefactor(p.pair.d_sigma) * f_envelope_cosh(w, &p.detector) * sum)
}

/// `C_GW / (A lambda^2) = -exp(-w^2/4) cos(w t0) (I3 + I4) / (4 D^2 pi^(3/2))`, real.
pub fn c_gw(p: &DimensionlessParams) -> Result<ComplexValue, ModelError> {
    let w = p.gw.omega_sigma.abs();
    let sum = integral_i3(w, &p.detector, &p.pair)? + integral_i4(w, &p.detector, &p.pair)?;
    let value = -axis_sign(&p.pair)
        * gw_prefactor(p.pair.d_sigma)
        * (-0.25 * w * w).exp()
        * (w * p.detector.t0_sigma).cos()
        * sum;
    Ok(Complex64::new(value, 0.0))
}

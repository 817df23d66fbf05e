use crate::model::{check_geometry, DetectorParams, ModelError, PairGeometry};
use crate::specfun::{faddeeva_w, scaled_erf_product, ComplexValue, SQRT_PI};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `P / lambda^2 = (1/4 pi) [exp(-Omega^2) - sqrt(pi) Omega erfc(Omega)]`.
///
/// Takes no gravitational-wave argument: a single static detector cannot see
/// the wave at this order.
pub fn transition_probability(det: &DetectorParams) -> f64 {
    let g = det.gap_omega_sigma;
    if g > 0.5 {
        // exp(-g^2) factored out: erfc(g) = exp(-g^2) erfcx(g)
        let erfcx = faddeeva_w(Complex64::new(0.0, g)).re;
        (-g * g).exp() * (1.0 - SQRT_PI * g * erfcx) / (4.0 * PI)
    } else {
        ((-g * g).exp() - SQRT_PI * g * libm::erfc(g)) / (4.0 * PI)
    }
}

/// Non-local term `X_M / lambda^2`.
pub fn x_minkowski(det: &DetectorParams, pair: &PairGeometry) -> Result<ComplexValue, ModelError> {
    check_geometry(pair)?;
    let d = pair.d_sigma;
    let g = det.gap_omega_sigma;
    let half = 0.5 * d;
    // exp(-D^2/4) [erf(iD/2) - 1]
    let bracket = scaled_erf_product(half, Complex64::new(0.0, half)).expect("Im z = p is always in range")
        - (-half * half).exp();
    let phase = Complex64::from_polar((-g * g).exp(), -2.0 * g * det.t0_sigma);
    Ok(Complex64::i() * phase * bracket / (4.0 * d * SQRT_PI))
}

/// Local cross term `C_M / lambda^2`; real-valued and independent of t0.
pub fn c_minkowski(det: &DetectorParams, pair: &PairGeometry) -> Result<ComplexValue, ModelError> {
    check_geometry(pair)?;
    let d = pair.d_sigma;
    let g = det.gap_omega_sigma;
    let half = 0.5 * d;
    let scaled = scaled_erf_product(half, Complex64::new(g, half)).expect("Im z = p is always in range");
    let im = (Complex64::from_polar(1.0, d * g) * scaled).im - (-half * half).exp() * (g * d).sin();
    Ok(Complex64::new(im / (4.0 * d * SQRT_PI), 0.0))
}

//! Real and complex error-function family.
//!
//! Everything downstream reduces to the Faddeeva function
//! `w(z) = exp(-z^2) erfc(-iz)`, which stays O(1) in the upper half-plane
//! while `erf(x + iy)` grows like `exp(y^2)`. Products of the form
//! `exp(-p^2) erf(z)` are therefore assembled from `w` with the Gaussian
//! exponents combined before exponentiation (see [`scaled_erf_product`]).

use num_complex::Complex64;
use thiserror::Error;

/// Complex carrier used for matrix elements, `erf(z)` and `w(z)`.
pub type ComplexValue = Complex64;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
/// sqrt(pi)
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Largest |Im z| for which [`erf_complex`] is in contract.
pub const MAX_IMAG_ERF: f64 = 30.0;
/// Largest exponent handed to `exp` before the result is declared unrepresentable.
const MAX_EXP_ARG: f64 = 700.0;
/// Below this modulus `erf` is summed from its Maclaurin series.
const ERF_SERIES_RADIUS: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error(
        "argument {re} + {im}i is outside the representable range of erf (|Im z| <= {MAX_IMAG_ERF} and no overflow)"
    )]
    DomainTooLarge { re: f64, im: f64 },
    #[error("non-finite argument {re} + {im}i")]
    NonFinite { re: f64, im: f64 },
}

/// Error function of a real argument.
pub fn erf_real(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function of a real argument.
pub fn erfc_real(x: f64) -> f64 {
    libm::erfc(x)
}

/// `sin(x)/x`, with the even Taylor polynomial near the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Dawson's integral `F(x) = exp(-x^2) * int_0^x exp(t^2) dt`.
pub fn dawson(x: f64) -> f64 {
    0.5 * SQRT_PI * faddeeva_w(Complex64::new(x, 0.0)).im
}

/// Imaginary error function `erfi(x) = -i erf(ix)`. Overflows to infinity for
/// `|x| > ~26.6`, where the true value exceeds `f64::MAX`.
pub fn erfi(x: f64) -> f64 {
    if x.abs() < ERF_SERIES_RADIUS {
        return erf_maclaurin(Complex64::new(0.0, x)).im;
    }
    TWO_OVER_SQRT_PI * (x * x).exp() * dawson(x)
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
///
/// Defined on the whole plane; the lower half-plane is reached through the
/// reflection `w(-conj z) = conj(w(z))` and `w(-z) = 2 exp(-z^2) - w(z)`,
/// the latter overflowing once `Im z` is sufficiently negative. The upper
/// half-plane is split into three regions in the scaled radius
/// `rho^2 = (x/6.3)^2 + (y/4.4)^2`: a Maclaurin series of `erfc(-iz)` inside
/// `rho^2 < 0.085264`, a Taylor expansion about the shifted point `z + ih`
/// (derivatives generated by a continued-fraction recurrence) for
/// `rho^2 <= 1`, and the Laplace continued fraction outside.
pub fn faddeeva_w(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        let minus_z = -z;
        let e = (-(minus_z * minus_z)).exp();
        return 2.0 * e - faddeeva_w(minus_z);
    }
    let x = z.re.abs();
    let y = z.im;
    let rho2 = (x / 6.3).powi(2) + (y / 4.4).powi(2);
    let w = if rho2 < MACLAURIN_SEAM {
        w_maclaurin(x, y)
    } else if rho2 <= 1.0 {
        w_shifted_taylor(x, y)
    } else {
        w_continued_fraction(x, y)
    };
    if z.re < 0.0 {
        w.conj()
    } else {
        w
    }
}

const MACLAURIN_SEAM: f64 = 0.085_264;

/// Maclaurin branch for `x >= 0`, `y >= 0` inside the inner seam.
pub(crate) fn w_maclaurin(x: f64, y: f64) -> Complex64 {
    let xs = x / 6.3;
    let ys = y / 4.4;
    let rho = (1.0 - 0.85 * ys) * (xs * xs + ys * ys).sqrt();
    let n = (6.0 + 72.0 * rho).round() as i64;
    let xquad = x * x - y * y;
    let yquad = 2.0 * x * y;
    let mut j = 2 * n + 1;
    let mut xsum = 1.0 / j as f64;
    let mut ysum = 0.0;
    for i in (1..=n).rev() {
        j -= 2;
        let xaux = (xsum * xquad - ysum * yquad) / i as f64;
        ysum = (xsum * yquad + ysum * xquad) / i as f64;
        xsum = xaux + 1.0 / j as f64;
    }
    let u1 = -TWO_OVER_SQRT_PI * (xsum * y + ysum * x) + 1.0;
    let v1 = TWO_OVER_SQRT_PI * (xsum * x - ysum * y);
    let daux = (-xquad).exp();
    let u2 = daux * yquad.cos();
    let v2 = -daux * yquad.sin();
    Complex64::new(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2)
}

/// Shifted-Taylor branch for `x >= 0`, `y >= 0` between the seams.
pub(crate) fn w_shifted_taylor(x: f64, y: f64) -> Complex64 {
    let xs = x / 6.3;
    let ys = y / 4.4;
    let q = (1.0 - ys) * (1.0 - (xs * xs + ys * ys)).max(0.0).sqrt();
    let h = 1.88 * q;
    let kapn = (7.0 + 34.0 * q).round() as i32;
    let nu = (16.0 + 26.0 * q).round() as i32;
    laplace_recurrence(x, y, h, kapn, nu)
}

/// Laplace continued-fraction branch for `x >= 0`, `y >= 0` outside the outer seam.
pub(crate) fn w_continued_fraction(x: f64, y: f64) -> Complex64 {
    let rho = ((x / 6.3).powi(2) + (y / 4.4).powi(2)).sqrt();
    let nu = (3.0 + 1442.0 / (26.0 * rho + 77.0)) as i32;
    laplace_recurrence(x, y, 0.0, 0, nu)
}

fn laplace_recurrence(x: f64, y: f64, h: f64, kapn: i32, nu: i32) -> Complex64 {
    let taylor = h > 0.0;
    let h2 = 2.0 * h;
    let mut lambda = if taylor { h2.powi(kapn) } else { 0.0 };
    let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for n in (0..=nu).rev() {
        let np1 = f64::from(n + 1);
        let tx = y + h + np1 * rx;
        let ty = x - np1 * ry;
        let c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if taylor && n <= kapn {
            let t = lambda + sx;
            sx = rx * t - ry * sy;
            sy = ry * t + rx * sy;
            lambda /= h2;
        }
    }
    let (mut u, v) = if taylor {
        (TWO_OVER_SQRT_PI * sx, TWO_OVER_SQRT_PI * sy)
    } else {
        (TWO_OVER_SQRT_PI * rx, TWO_OVER_SQRT_PI * ry)
    };
    if y == 0.0 {
        u = (-x * x).exp();
    }
    Complex64::new(u, v)
}

fn erf_maclaurin(z: Complex64) -> Complex64 {
    // erf(z) = 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1))
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..40 {
        term = -term * z2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

fn check_finite(z: Complex64) -> Result<(), SpecfunError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpecfunError::NonFinite { re: z.re, im: z.im })
    }
}

/// Complex error function.
///
/// In contract for `|Im z| <= 30` whenever the result itself is representable;
/// outside that range use [`scaled_erf_product`].
pub fn erf_complex(z: Complex64) -> Result<Complex64, SpecfunError> {
    check_finite(z)?;
    if z.im.abs() > MAX_IMAG_ERF || z.im * z.im - z.re * z.re > MAX_EXP_ARG {
        return Err(SpecfunError::DomainTooLarge { re: z.re, im: z.im });
    }
    Ok(scaled_erf_unchecked(0.0, z))
}

/// `exp(-p^2) * erf(z)` without forming `erf(z)` on its own.
///
/// The exponent `-p^2 - z^2` is combined before exponentiation, so for
/// `Im z ~ p` the result is O(1) even when `erf(z)` alone would overflow.
pub fn scaled_erf_product(p: f64, z: Complex64) -> Result<Complex64, SpecfunError> {
    check_finite(z)?;
    if !p.is_finite() {
        return Err(SpecfunError::NonFinite { re: p, im: 0.0 });
    }
    let x = z.re.abs();
    if z.im * z.im - x * x - p * p > MAX_EXP_ARG {
        return Err(SpecfunError::DomainTooLarge { re: z.re, im: z.im });
    }
    Ok(scaled_erf_unchecked(p, z))
}

fn scaled_erf_unchecked(p: f64, z: Complex64) -> Complex64 {
    if z.norm() < ERF_SERIES_RADIUS {
        return (-p * p).exp() * erf_maclaurin(z);
    }
    if z.re < 0.0 {
        return -scaled_erf_unchecked(p, -z);
    }
    if z.im == 0.0 {
        return Complex64::new((-p * p).exp() * erf_real(z.re), 0.0);
    }
    // erf(z) = 1 - exp(-z^2) w(iz), with Im(iz) = Re z >= 0.
    let w = faddeeva_w(Complex64::new(-z.im, z.re));
    let log_mag = -p * p - (z.re * z.re - z.im * z.im);
    let phase = -2.0 * z.re * z.im;
    let e = Complex64::from_polar(log_mag.exp(), phase);
    Complex64::new((-p * p).exp(), 0.0) - e * w
}

/// `exp(-p^2) * erf(x)` for real `x`; a convenience for the real limits.
pub fn scaled_erf_real(p: f64, x: f64) -> f64 {
    (-p * p).exp() * erf_real(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn erf_real_fixed_points() {
        assert_eq!(erf_real(0.0), 0.0);
        assert!((erf_real(10.0) - 1.0).abs() <= 1e-15);
        assert!(erf_real(-3.0) >= -1.0 && erf_real(3.0) <= 1.0);
    }

    #[test]
    fn sinc_branches() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(PI).abs() < 1e-15);
        let x = 1e-5;
        assert_eq!(sinc(x), 1.0 - x * x / 6.0 + x.powi(4) / 120.0);
        assert!((sinc(x) - (1.0 - 1e-10 / 6.0)).abs() < 1e-16);
        assert!((sinc(0.3) - 0.3f64.sin() / 0.3).abs() < 1e-16);
    }

    #[test]
    fn w_at_origin_and_imaginary_axis() {
        assert_eq!(faddeeva_w(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        for y in [0.1, 0.7, 2.0, 5.0, 9.0] {
            let w = faddeeva_w(Complex64::new(0.0, y));
            assert!(w.im.abs() <= 1e-16 * w.re.abs(), "w(i{y}) = {w}");
            // w(iy) = erfcx(y)
            let erfcx = (y * y).exp() * erfc_real(y);
            assert!((w.re - erfcx).abs() <= 1e-13 * erfcx, "y = {y}");
        }
    }

    #[test]
    fn erf_complex_small_cases() {
        assert_eq!(erf_complex(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let v = erf_complex(Complex64::new(0.0, 1.3)).unwrap();
        assert!(v.re.abs() <= 1e-13);
        assert!((v.im - erfi(1.3)).abs() <= 1e-13 * erfi(1.3));
    }

    #[test]
    fn erf_complex_rejects_large_imaginary_part() {
        assert!(matches!(erf_complex(Complex64::new(0.0, 31.0)), Err(SpecfunError::DomainTooLarge { .. })));
        assert!(matches!(erf_complex(Complex64::new(0.1, 28.0)), Err(SpecfunError::DomainTooLarge { .. })));
        assert!(erf_complex(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn scaled_product_trivial_cases() {
        let v = scaled_erf_product(0.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - erf_real(1.0)).abs() < 1e-16 && v.im == 0.0);
        let v = scaled_erf_product(10.0, Complex64::new(1.0, 10.0)).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite() && v.norm() < 2.0);
        // far beyond where erf alone is representable
        let v = scaled_erf_product(29.0, Complex64::new(0.7, 29.0)).unwrap();
        assert!(v.norm() < 2.0 && v.norm() > 0.0);
    }

    #[test]
    fn branch_seams_agree() {
        // inner seam: rho^2 = 0.085264, outer seam: rho^2 = 1
        for k in 0..=40 {
            let theta = 0.5 * PI * f64::from(k) / 40.0;
            let r = MACLAURIN_SEAM.sqrt();
            let (x, y) = (6.3 * r * theta.cos(), 4.4 * r * theta.sin());
            let a = w_maclaurin(x, y);
            let b = w_shifted_taylor(x, y);
            assert!(rel(a, b) <= 1e-12, "inner seam at ({x}, {y}): {a} vs {b}");
            let (x, y) = (6.3 * theta.cos(), 4.4 * theta.sin());
            let a = w_shifted_taylor(x, y);
            let b = w_continued_fraction(x, y);
            assert!(rel(a, b) <= 1e-12, "outer seam at ({x}, {y}): {a} vs {b}");
        }
    }

    #[test]
    fn lower_half_plane_reflection() {
        let z = Complex64::new(0.8, 0.6);
        assert!(rel(faddeeva_w(-z.conj()), faddeeva_w(z).conj()) < 1e-15);
        let lower = Complex64::new(0.8, -0.6);
        let expected = 2.0 * (-(lower * lower)).exp() - faddeeva_w(-lower);
        assert_eq!(faddeeva_w(lower), expected);
    }
}

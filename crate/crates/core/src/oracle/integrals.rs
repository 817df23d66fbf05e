//! Quadrature oracles, one per closed form.
//!
//! Regulated oracles evaluate their integral at every value of a
//! [`RegulatorSchedule`] and extrapolate to zero regulator. The `iε` kernels
//! expand in all powers of epsilon; the nascent `δ'` kernels expand in even
//! powers of eta, so they are extrapolated in `eta^2`.

use super::extrapolate::{extrapolate, RegulatorSchedule};
use super::kernels::{nascent_delta_prime, wightman, wightman_gw, EpsilonConvention};
use super::quad::{gaussian_tail_radius, integrate, QuadOptions, QuadResult};
use super::{OracleError, OracleEstimate};
use crate::closedform::{transition_probability, x_minkowski};
use crate::model::{check_geometry, DetectorParams, DimensionlessParams, PairGeometry, SeparationAxis, SpacetimePoint};
use crate::specfun::{sinc, SQRT_PI};
use num_complex::Complex64;
use std::cell::RefCell;
use std::f64::consts::PI;

/// Knobs shared by all oracles.
#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub epsilon_schedule: RegulatorSchedule,
    pub eta_schedule: RegulatorSchedule,
    pub convention: EpsilonConvention,
    /// Relative tolerance of each inner quadrature.
    pub quad_rel_tol: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            epsilon_schedule: RegulatorSchedule::default(),
            eta_schedule: RegulatorSchedule::default(),
            convention: EpsilonConvention::Standard,
            quad_rel_tol: 1e-12,
        }
    }
}

/// Which `δ'` integral [`oracle_delta_prime`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaPrimeTarget {
    I1,
    I3,
}

/// Half-width of the Gaussian-damped ranges. The tail beyond it is far below
/// any tolerance an oracle accepts.
fn radius(rate: f64, envelope: impl Fn(f64) -> f64) -> f64 {
    gaussian_tail_radius(rate, 1e-18, envelope)
}

fn opts(settings: &OracleSettings) -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: settings.quad_rel_tol, max_subdivisions: 4000 }
}

/// Outer pass of a nested integral. Inner results carry noise at
/// `quad_rel_tol` of their own scale, which the outer pass cannot beat when
/// the outer integrand cancels.
fn outer_opts(settings: &OracleSettings) -> QuadOptions {
    QuadOptions { rel_tol: 100.0 * settings.quad_rel_tol, ..opts(settings) }
}

fn finish(
    schedule: &RegulatorSchedule,
    sequence: Vec<Complex64>,
    tol: f64,
    abscissa: impl Fn(f64) -> f64,
) -> OracleEstimate {
    let (value, abs_error_estimate) = extrapolate(schedule, &sequence, abscissa);
    let tolerance = tol * value.norm();
    OracleEstimate {
        value,
        abs_error_estimate,
        regulator_schedule: schedule.values().to_vec(),
        sequence,
        converged: abs_error_estimate <= tolerance,
        tolerance,
    }
}

/// Runs `at` over the schedule. Each evaluation returns its value and
/// quadrature error; the largest quadrature error is added to the
/// extrapolation error.
fn regulated(
    schedule: &RegulatorSchedule,
    tol: f64,
    abscissa: impl Fn(f64) -> f64,
    mut at: impl FnMut(f64) -> Result<(Complex64, f64), OracleError>,
) -> Result<OracleEstimate, OracleError> {
    let runs = schedule.values().iter().map(|&r| at(r)).collect::<Result<Vec<_>, _>>()?;
    let quad_error = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let mut est = finish(schedule, runs.into_iter().map(|r| r.0).collect(), tol, abscissa);
    est.abs_error_estimate += quad_error;
    est.converged = est.abs_error_estimate <= est.tolerance;
    Ok(est)
}

fn with_error(r: QuadResult) -> (Complex64, f64) {
    (r.value, r.abs_error)
}

fn unregulated(value: Complex64, abs_error: f64, tol: f64) -> OracleEstimate {
    let tolerance = tol * value.norm();
    OracleEstimate {
        value,
        abs_error_estimate: abs_error,
        regulator_schedule: Vec::new(),
        sequence: vec![value],
        converged: abs_error <= tolerance,
        tolerance,
    }
}

/// `sigma_eps = r^2 - (dt + shift i eps)^2` for a static pair.
fn static_interval(dt: f64, r2: f64, eps: f64, conv: EpsilonConvention) -> Complex64 {
    let z = Complex64::new(dt, conv.shift() * eps);
    r2 - z * z
}

fn w_static(dt: f64, r2: f64, eps: f64, conv: EpsilonConvention) -> Complex64 {
    1.0 / (4.0 * PI * PI * static_interval(dt, r2, eps, conv))
}

/// `P / lambda^2 = sqrt(pi) int da exp(-a^2/4 - i Omega a) W_eps(a)` on a single worldline.
pub fn oracle_p(det: &DetectorParams, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_p_with(det, tol, &OracleSettings::default())
}

pub fn oracle_p_with(det: &DetectorParams, tol: f64, settings: &OracleSettings) -> Result<OracleEstimate, OracleError> {
    let g = det.gap_omega_sigma;
    let conv = settings.convention;
    let r = radius(0.25, |_| 1.0);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let f = |a: f64| {
                SQRT_PI * (-0.25 * a * a).exp() * Complex64::from_polar(1.0, -g * a) * w_static(a, 0.0, eps, conv)
            };
            Ok(with_error(integrate(f, -r, r, &[0.0], opts(settings))?))
        },
    )
}

/// `X_M / lambda^2 = -2 sqrt(pi) exp(-Omega^2 - 2i Omega t0) int_0^inf da exp(-a^2/4) W_eps(-a; D)`.
pub fn oracle_xm(det: &DetectorParams, pair: &PairGeometry, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_xm_with(det, pair, tol, &OracleSettings::default())
}

fn xm_prefactor(det: &DetectorParams) -> Complex64 {
    let g = det.gap_omega_sigma;
    -2.0 * SQRT_PI * Complex64::from_polar((-g * g).exp(), -2.0 * g * det.t0_sigma)
}

pub fn oracle_xm_with(
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_geometry(pair)?;
    let d = pair.d_sigma;
    let conv = settings.convention;
    let pre = xm_prefactor(det);
    let r = radius(0.25, |_| 1.0).max(2.0 * d);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let f = |a: f64| (-0.25 * a * a).exp() * w_static(-a, d * d, eps, conv);
            let q = integrate(f, 0.0, r, &[d], opts(settings))?;
            Ok((pre * q.value, pre.norm() * q.abs_error))
        },
    )
}

/// Regulator-free `X_M`: principal value by subtraction at `a = D` plus the
/// delta contribution in closed form.
pub fn oracle_xm_subtraction(
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
) -> Result<OracleEstimate, OracleError> {
    oracle_xm_subtraction_with(det, pair, tol, &OracleSettings::default())
}

pub fn oracle_xm_subtraction_with(
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_geometry(pair)?;
    let d = pair.d_sigma;
    let g = |a: f64| (-0.25 * a * a).exp();
    let gd = g(d);
    let o = opts(settings);
    let r = radius(0.25, |_| 1.0).max(4.0 * d);
    // 1/(D^2 - a^2) = -(1/2D) [1/(a - D) - 1/(a + D)]
    let near = integrate(|a| Complex64::new((g(a) - gd) / (a - d), 0.0), 0.0, 2.0 * d, &[d], o)?;
    let far = integrate(|a| Complex64::new(g(a) / (a - d), 0.0), 2.0 * d, r, &[], o)?;
    let mirror = integrate(|a| Complex64::new(g(a) / (a + d), 0.0), 0.0, r, &[], o)?;
    let pv = -(near.value + far.value - mirror.value) / (2.0 * d);
    // (a - D - shift i eps)^(-1) -> PV + shift i pi delta(a - D), through the
    // factor -1/(a + D) at a = D
    let delta = Complex64::new(0.0, -settings.convention.shift() * PI * gd / (2.0 * d));
    let value = xm_prefactor(det) * (pv + delta) / (4.0 * PI * PI);
    let err = (near.abs_error + far.abs_error + mirror.abs_error) / (8.0 * PI * PI * d) * xm_prefactor(det).norm();
    Ok(unregulated(value, err, tol))
}

/// `C_M / lambda^2 = sqrt(pi) int da exp(-a^2/4 + i Omega a) W_eps(-a; D)`.
pub fn oracle_cm(det: &DetectorParams, pair: &PairGeometry, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_cm_with(det, pair, tol, &OracleSettings::default())
}

pub fn oracle_cm_with(
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_geometry(pair)?;
    let d = pair.d_sigma;
    let g = det.gap_omega_sigma;
    let conv = settings.convention;
    let r = radius(0.25, |_| 1.0).max(2.0 * d);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let f = |a: f64| {
                SQRT_PI * (-0.25 * a * a).exp() * Complex64::from_polar(1.0, g * a) * w_static(-a, d * d, eps, conv)
            };
            Ok(with_error(integrate(f, -r, r, &[-d, 0.0, d], opts(settings))?))
        },
    )
}

/// `exp(-w^2/4 - x^2) sinh(w x)` for `w >= 0` without overflow.
fn damped_sinh(w: f64, x: f64) -> f64 {
    let ax = x.abs();
    let v = 0.5 * (-(ax - 0.5 * w).powi(2)).exp() * -(-2.0 * w * ax).exp_m1();
    v.copysign(x)
}

fn check_frequency(omega_sigma: f64) -> Result<(), OracleError> {
    if omega_sigma > 0.0 && omega_sigma.is_finite() {
        Ok(())
    } else {
        Err(OracleError::InvalidFrequency { omega_sigma })
    }
}

/// Smooth representation
/// `I2 = (sqrt(pi)/2w) exp(-w^2/4) int ds sgn(s) exp(-s^2) sinh(w s) [2 - 2cos(Ds) - Ds sin(Ds)]`,
/// folded onto `s >= 0` (the integrand is even).
pub fn oracle_i2(omega_sigma: f64, pair: &PairGeometry, tol: f64) -> Result<OracleEstimate, OracleError> {
    check_frequency(omega_sigma)?;
    check_geometry(pair)?;
    let w = omega_sigma;
    let d = pair.d_sigma;
    let f = |s: f64| {
        let ds = d * s;
        Complex64::new(damped_sinh(w, s) * (2.0 - 2.0 * ds.cos() - ds * ds.sin()), 0.0)
    };
    let hi = 0.5 * w + radius(1.0, |x| 4.0 + d * (x + w));
    let r = integrate(f, 0.0, hi, &[0.5 * w], QuadOptions::relative(1e-13))?;
    let scale = SQRT_PI / w;
    Ok(unregulated(r.value * scale, r.abs_error * scale, tol))
}

/// Smooth representation
/// `I4 = (sqrt(pi)/w) exp(-w^2/4) int ds exp(-(G-s)^2) sinh(w(G-s)) sgn(s) (Ds sin(Ds) + 2cos(Ds) - 2)`.
pub fn oracle_i4(
    omega_sigma: f64,
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
) -> Result<OracleEstimate, OracleError> {
    check_frequency(omega_sigma)?;
    check_geometry(pair)?;
    let w = omega_sigma;
    let g = det.gap_omega_sigma;
    let d = pair.d_sigma;
    let f = |s: f64| {
        let ds = d * s;
        let bracket = ds * ds.sin() + 2.0 * ds.cos() - 2.0;
        Complex64::new(damped_sinh(w, g - s) * bracket * s.signum(), 0.0)
    };
    let reach = radius(1.0, |x| 4.0 + d * (x + w + g.abs()));
    let lo = g - 0.5 * w - reach;
    let hi = g + 0.5 * w + reach;
    let r = integrate(f, lo, hi, &[0.0, g - 0.5 * w, g, g + 0.5 * w], QuadOptions::relative(1e-13))?;
    let scale = SQRT_PI / w;
    Ok(unregulated(r.value * scale, r.abs_error * scale, tol))
}

/// I1 or I3 from their defining `δ'(a - D^2/a)` integrals with a Gaussian
/// nascent `δ'` of width eta.
pub fn oracle_delta_prime(
    target: DeltaPrimeTarget,
    omega_sigma: f64,
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
) -> Result<OracleEstimate, OracleError> {
    oracle_delta_prime_with(target, omega_sigma, det, pair, tol, &OracleSettings::default())
}

pub fn oracle_delta_prime_with(
    target: DeltaPrimeTarget,
    omega_sigma: f64,
    det: &DetectorParams,
    pair: &PairGeometry,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_frequency(omega_sigma)?;
    check_geometry(pair)?;
    let w = omega_sigma;
    let g = det.gap_omega_sigma;
    let d = pair.d_sigma;
    let d4 = d.powi(4);
    let smooth = |a: f64| (-0.25 * a * a).exp() / (a * a) * sinc(0.5 * w * a);
    // root of a - D^2/a = y on a > 0
    let root = |y: f64| 0.5 * (y + (y * y + 4.0 * d * d).sqrt());
    regulated(
        &settings.eta_schedule,
        tol,
        |e| e * e,
        |eta| {
            let reach = 40.0 * eta;
            let (lo, hi) = (root(-reach), root(reach));
            let kernel = |a: f64| nascent_delta_prime(a - d * d / a, eta);
            match target {
                DeltaPrimeTarget::I1 => {
                    let f = |a: f64| Complex64::new(smooth(a) * kernel(a), 0.0);
                    let r = integrate(f, lo, hi, &[d], opts(settings))?;
                    Ok((Complex64::new(0.0, PI * d4) * r.value, PI * d4 * r.abs_error))
                }
                DeltaPrimeTarget::I3 => {
                    let f = |a: f64| Complex64::from_polar(smooth(a) * kernel(a), g * a);
                    let right = integrate(f, lo, hi, &[d], opts(settings))?;
                    let left = integrate(f, -hi, -lo, &[-d], opts(settings))?;
                    Ok((
                        Complex64::new(0.0, PI * d4) * (right.value + left.value),
                        PI * d4 * (right.abs_error + left.abs_error),
                    ))
                }
            }
        },
    )
}

struct Nested {
    failure: RefCell<Option<OracleError>>,
    opts: QuadOptions,
}

impl Nested {
    fn new(opts: QuadOptions) -> Self {
        Nested { failure: RefCell::new(None), opts }
    }

    /// Inner integral; failures are parked and surface after the outer pass.
    fn inner(&self, f: impl Fn(f64) -> Complex64, a: f64, b: f64, breaks: &[f64]) -> Complex64 {
        match integrate(f, a, b, breaks, self.opts) {
            Ok(r) => r.value,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    }

    fn check(&self) -> Result<(), OracleError> {
        match self.failure.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn worldline_a(t: f64) -> SpacetimePoint {
    SpacetimePoint::new(t, 0.0, 0.0, 0.0)
}

fn worldline_b(t: f64, pair: &PairGeometry) -> SpacetimePoint {
    match pair.axis {
        SeparationAxis::X => SpacetimePoint::new(t, pair.d_sigma, 0.0, 0.0),
        SeparationAxis::Y => SpacetimePoint::new(t, 0.0, pair.d_sigma, 0.0),
    }
}

/// Single-detector transition probability from the full two-point function
/// `W_M + A W_GW`, integrated over both switching times.
pub fn oracle_full_p(p: &DimensionlessParams, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_full_p_with(p, tol, &OracleSettings::default())
}

pub fn oracle_full_p_with(
    p: &DimensionlessParams,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    let g = p.detector.gap_omega_sigma;
    let t0 = p.detector.t0_sigma;
    let (amp, w) = (p.gw.amplitude_a, p.gw.omega_sigma);
    let conv = settings.convention;
    let r = radius(0.25, |_| 1.0);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let nested = Nested::new(opts(settings));
            let outer = |b: f64| {
                let inner = |a: f64| {
                    let (t, tp) = (0.5 * (b + a), 0.5 * (b - a));
                    let chi = (-0.25 * a * a - 0.25 * (b - 2.0 * t0).powi(2)).exp();
                    0.5 * chi
                        * Complex64::from_polar(1.0, -g * a)
                        * wightman(worldline_a(t), worldline_a(tp), amp, w, eps, conv)
                };
                nested.inner(inner, -r, r, &[0.0])
            };
            let v = integrate(outer, 2.0 * t0 - r, 2.0 * t0 + r, &[2.0 * t0], outer_opts(settings))?;
            nested.check()?;
            Ok(with_error(v))
        },
    )
}

/// `X_GW / (A lambda^2)` from the first-order two-point function, integrated
/// over both switching times without using the b-integral in closed form.
pub fn oracle_full_x_gw(p: &DimensionlessParams, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_full_x_gw_with(p, tol, &OracleSettings::default())
}

pub fn oracle_full_x_gw_with(
    p: &DimensionlessParams,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_geometry(&p.pair)?;
    let g = p.detector.gap_omega_sigma;
    let t0 = p.detector.t0_sigma;
    let w = p.gw.omega_sigma;
    let d = p.pair.d_sigma;
    let conv = settings.convention;
    let r = radius(0.25, |_| 1.0).max(2.0 * d);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let nested = Nested::new(opts(settings));
            let outer = |b: f64| {
                let env = (-0.25 * (b - 2.0 * t0).powi(2)).exp() * Complex64::from_polar(1.0, -g * b);
                let inner = |a: f64| {
                    let (t, tp) = (0.5 * (b + a), 0.5 * (b - a));
                    let k = wightman_gw(worldline_a(tp), worldline_b(t, &p.pair), w, eps, conv)
                        + wightman_gw(worldline_b(tp, &p.pair), worldline_a(t), w, eps, conv);
                    -0.5 * (-0.25 * a * a).exp() * k
                };
                env * nested.inner(inner, 0.0, r, &[d])
            };
            let v = integrate(outer, 2.0 * t0 - r, 2.0 * t0 + r, &[2.0 * t0], outer_opts(settings))?;
            nested.check()?;
            Ok(with_error(v))
        },
    )
}

/// `C_GW / (A lambda^2)` from the first-order two-point function.
pub fn oracle_full_c_gw(p: &DimensionlessParams, tol: f64) -> Result<OracleEstimate, OracleError> {
    oracle_full_c_gw_with(p, tol, &OracleSettings::default())
}

pub fn oracle_full_c_gw_with(
    p: &DimensionlessParams,
    tol: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    check_geometry(&p.pair)?;
    let g = p.detector.gap_omega_sigma;
    let t0 = p.detector.t0_sigma;
    let w = p.gw.omega_sigma;
    let d = p.pair.d_sigma;
    let conv = settings.convention;
    let r = radius(0.25, |_| 1.0).max(2.0 * d);
    regulated(
        &settings.epsilon_schedule,
        tol,
        |e| e,
        |eps| {
            let nested = Nested::new(opts(settings));
            let outer = |b: f64| {
                let env = (-0.25 * (b - 2.0 * t0).powi(2)).exp();
                let inner = |a: f64| {
                    let (t, tp) = (0.5 * (b + a), 0.5 * (b - a));
                    let k = wightman_gw(worldline_a(tp), worldline_b(t, &p.pair), w, eps, conv);
                    0.5 * (-0.25 * a * a).exp() * Complex64::from_polar(1.0, g * a) * k
                };
                env * nested.inner(inner, -r, r, &[-d, 0.0, d])
            };
            let v = integrate(outer, 2.0 * t0 - r, 2.0 * t0 + r, &[2.0 * t0], outer_opts(settings))?;
            nested.check()?;
            Ok(with_error(v))
        },
    )
}

/// Reference points at which the `iε` orientation is checked against the
/// closed forms. P at zero gap cannot tell the orientations apart, so both
/// points have a nonzero gap.
pub const CALIBRATION_GAP: f64 = 1.0;
pub const CALIBRATION_D: f64 = 2.0;
pub const CALIBRATION_T0: f64 = 0.5;

type Run<'a> = dyn Fn(&OracleSettings) -> Result<OracleEstimate, OracleError> + 'a;

/// Confirms that `settings.convention` reproduces the closed forms for P and
/// X_M. Fails with [`OracleError::SignConventionMismatch`] when either
/// deviates by more than `100 tol`.
pub fn calibrate_epsilon_convention(tol: f64, settings: &OracleSettings) -> Result<EpsilonConvention, OracleError> {
    let det = DetectorParams { gap_omega_sigma: CALIBRATION_GAP, t0_sigma: CALIBRATION_T0, coupling_lambda: 1.0 };
    let pair = PairGeometry::along_x(CALIBRATION_D);
    let p_closed = Complex64::new(transition_probability(&det), 0.0);
    let x_closed = x_minkowski(&det, &pair)?;
    let checks: [(&'static str, Complex64, Box<Run>); 2] = [
        ("P", p_closed, Box::new(|s| oracle_p_with(&det, tol, s))),
        ("X_M", x_closed, Box::new(|s| oracle_xm_with(&det, &pair, tol, s))),
    ];
    for (quantity, closed, run) in checks.iter() {
        let oracle = run(settings)?.value;
        let deviation = (oracle - closed).norm() / closed.norm();
        if deviation > 100.0 * tol {
            let mut flipped = settings.clone();
            flipped.convention = settings.convention.flipped();
            let other = run(&flipped)?.value;
            let flipped_agrees = (other - closed).norm() / closed.norm() <= 100.0 * tol;
            return Err(OracleError::SignConventionMismatch {
                quantity,
                closed: *closed,
                oracle,
                convention: settings.convention,
                flipped_agrees,
            });
        }
    }
    Ok(settings.convention)
}

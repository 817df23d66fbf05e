//! Closed-form harvesting observables.
//!
//! All values are normalized: `P`, `X_M`, `C_M`, `Theta_M`, `Psi_M`,
//! concurrence and correlation are divided by `lambda^2`; the
//! gravitational-wave parts `X_GW`, `C_GW`, `Theta_GW`, `Psi_GW` by
//! `A lambda^2`. Concrete `A` and `lambda` enter only at assembly.

mod gw;
mod minkowski;
mod state;

pub use gw::{
    c_gw, f_envelope, f_envelope_cosh, integral_i1, integral_i2, integral_i3, integral_i4, x_gw, x_gw_cosh_form,
    SMALL_OMEGA,
};
pub use minkowski::{c_minkowski, transition_probability, x_minkowski};
pub use state::{leading_concurrence, DetectorDensityMatrix};

use crate::model::{DimensionlessParams, ModelError};
use crate::specfun::ComplexValue;
use thiserror::Error;

/// Below this `|X_M| / lambda^2` the first-order correction `Theta_GW` is not reported.
pub const FIRST_ORDER_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("DegenerateDirection: |X_M| = {x_m_norm:e} leaves Theta_GW undefined")]
    DegenerateDirection { x_m_norm: f64 },
    #[error("StateInvalid: minimum eigenvalue {min_eigenvalue:e} below -{tolerance:e}; lambda too large")]
    StateInvalid { min_eigenvalue: f64, tolerance: f64 },
}

impl ClosedFormError {
    pub fn tag(&self) -> &'static str {
        match self {
            ClosedFormError::Model(e) => e.tag(),
            ClosedFormError::DegenerateDirection { .. } => "DegenerateDirection",
            ClosedFormError::StateInvalid { .. } => "StateInvalid",
        }
    }
}

/// Every observable at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvestReport {
    pub params: DimensionlessParams,
    pub p_norm: f64,
    pub x_m: ComplexValue,
    pub c_m: ComplexValue,
    pub x_gw: ComplexValue,
    pub c_gw: ComplexValue,
    pub theta_m: f64,
    /// `None` when `|X_M|` is below [`FIRST_ORDER_THRESHOLD`].
    pub theta_gw: Option<f64>,
    /// Concurrence at the configured `A`. When `theta_gw` is absent only
    /// `Theta_M` contributes.
    pub concurrence: f64,
    pub psi_m: f64,
    pub psi_gw: f64,
    /// Correlation function at the configured `A`.
    pub corr: f64,
}

impl HarvestReport {
    pub fn within_first_order_validity(&self) -> bool {
        self.theta_gw.is_some()
    }

    /// `ok`, or the reason a value is missing.
    pub fn status(&self) -> &'static str {
        if self.within_first_order_validity() {
            "ok"
        } else {
            "OutsideFirstOrderValidity"
        }
    }
}

/// `Re[x_gw conj(x_m)] / |x_m|`, the projection of the correction onto X_M.
fn theta_gw_from(x_m: ComplexValue, x_gw: ComplexValue) -> f64 {
    (x_gw * x_m.conj()).re / x_m.norm()
}

/// `(Theta_M, Theta_GW, concurrence)` at the configured amplitude.
pub fn concurrence(p: &DimensionlessParams) -> Result<(f64, f64, f64), ClosedFormError> {
    let prob = transition_probability(&p.detector);
    let x_m = x_minkowski(&p.detector, &p.pair)?;
    let x_m_norm = x_m.norm();
    if x_m_norm < 1e-300 {
        return Err(ClosedFormError::DegenerateDirection { x_m_norm });
    }
    let theta_m = x_m_norm - prob;
    let theta_gw = theta_gw_from(x_m, x_gw(p)?);
    Ok((theta_m, theta_gw, leading_concurrence(theta_m + p.gw.amplitude_a * theta_gw)))
}

/// `(Psi_M, Psi_GW, corr)` at the configured amplitude.
pub fn correlation(p: &DimensionlessParams) -> Result<(f64, f64, f64), ClosedFormError> {
    let prob = transition_probability(&p.detector);
    let x_m = x_minkowski(&p.detector, &p.pair)?;
    let c_m = c_minkowski(&p.detector, &p.pair)?;
    let (psi_m, psi_gw) = psi_parts(prob, x_m, c_m, x_gw(p)?, c_gw(p)?);
    Ok((psi_m, psi_gw, psi_m + p.gw.amplitude_a * psi_gw))
}

fn psi_parts(prob: f64, x_m: ComplexValue, c_m: ComplexValue, x_gw: ComplexValue, c_gw: ComplexValue) -> (f64, f64) {
    let psi_m = (x_m.norm_sqr() + c_m.norm_sqr()) / prob;
    let psi_gw = 2.0 * ((x_gw * x_m.conj()).re + (c_gw * c_m.conj()).re) / prob;
    (psi_m, psi_gw)
}

/// Full pipeline at one point.
pub fn harvest(p: &DimensionlessParams) -> Result<HarvestReport, ClosedFormError> {
    crate::model::validate(p)?;
    let prob = transition_probability(&p.detector);
    let x_m = x_minkowski(&p.detector, &p.pair)?;
    let c_m = c_minkowski(&p.detector, &p.pair)?;
    let xg = x_gw(p)?;
    let cg = c_gw(p)?;
    let theta_m = x_m.norm() - prob;
    let theta_gw = (x_m.norm() >= FIRST_ORDER_THRESHOLD).then(|| theta_gw_from(x_m, xg));
    let concurrence = leading_concurrence(theta_m + p.gw.amplitude_a * theta_gw.unwrap_or(0.0));
    let (psi_m, psi_gw) = psi_parts(prob, x_m, c_m, xg, cg);
    Ok(HarvestReport {
        params: *p,
        p_norm: prob,
        x_m,
        c_m,
        x_gw: xg,
        c_gw: cg,
        theta_m,
        theta_gw,
        concurrence,
        psi_m,
        psi_gw,
        corr: psi_m + p.gw.amplitude_a * psi_gw,
    })
}

/// Assembles the state with the configured `A` and `lambda`.
pub fn density_matrix(p: &DimensionlessParams) -> Result<DetectorDensityMatrix, ClosedFormError> {
    crate::model::validate(p)?;
    let l2 = p.detector.coupling_lambda.powi(2);
    let a = p.gw.amplitude_a;
    let prob = l2 * transition_probability(&p.detector);
    let x = l2 * (x_minkowski(&p.detector, &p.pair)? + a * x_gw(p)?);
    let c = l2 * (c_minkowski(&p.detector, &p.pair)? + a * c_gw(p)?);
    let rho = DetectorDensityMatrix::from_parts(prob, x, c);
    state::check_positive(&rho, p.detector.coupling_lambda)?;
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ParamKey;

    #[test]
    fn report_invariants() {
        let p = DimensionlessParams::new(0.05, 2.0, 1.0, 1.0, 0.0);
        let r = harvest(&p).unwrap();
        assert!(r.p_norm > 0.0);
        assert_eq!(r.theta_m, r.x_m.norm() - r.p_norm);
        assert!(r.concurrence >= 0.0);
        assert_eq!(r.status(), "ok");
        assert_eq!(r.c_m.im, 0.0);
        assert_eq!(r.c_gw.im, 0.0);
    }

    #[test]
    fn resonant_contribution_is_negative() {
        let p = DimensionlessParams::new(0.05, 2.0, 1.0, 1.0, 0.0);
        let (_, theta_gw, _) = concurrence(&p).unwrap();
        assert!(theta_gw < 0.0);
        let (_, psi_gw, _) = correlation(&p).unwrap();
        assert!(psi_gw < 0.0);
    }

    #[test]
    fn far_apart_detectors_harvest_nothing() {
        let p = DimensionlessParams::new(0.0, 2.0, 0.2, 8.0, 0.0);
        assert_eq!(concurrence(&p).unwrap().2, 0.0);
    }

    #[test]
    fn zero_amplitude_correlation() {
        let p = DimensionlessParams::new(0.0, 2.0, 1.0, 2.0, 1.0);
        let (psi_m, _, corr) = correlation(&p).unwrap();
        assert_eq!(corr, psi_m);
    }

    #[test]
    fn tiny_x_m_is_flagged() {
        // exp(-G^2) underflows the threshold long before anything else
        let p = DimensionlessParams::new(0.05, 2.0, 6.0, 2.0, 0.0);
        let r = harvest(&p).unwrap();
        assert_eq!(r.theta_gw, None);
        assert_eq!(r.status(), "OutsideFirstOrderValidity");
        assert_eq!(r.concurrence, leading_concurrence(r.theta_m));
    }

    #[test]
    fn density_matrix_checks() {
        let p = DimensionlessParams::new(0.05, 2.0, 1.0, 1.0, 0.3).with(ParamKey::Lambda, 0.01);
        let rho = density_matrix(&p).unwrap();
        assert_eq!(rho.trace().re, 1.0);
        assert_eq!(rho.hermiticity_defect(), 0.0);
        assert!(rho.min_eigenvalue() >= -1e-7);
        assert!(matches!(
            density_matrix(&p.with(ParamKey::DSigma, 0.0)),
            Err(ClosedFormError::Model(ModelError::InvalidGeometry { .. }))
        ));
    }
}

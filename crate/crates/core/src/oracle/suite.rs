//! Closed form versus oracle over a parameter grid.

use super::integrals::{
    calibrate_epsilon_convention, oracle_cm_with, oracle_delta_prime_with, oracle_full_c_gw_with, oracle_full_p_with,
    oracle_full_x_gw_with, oracle_i2, oracle_i4, oracle_p_with, oracle_xm_subtraction_with, oracle_xm_with,
    DeltaPrimeTarget, OracleSettings,
};
use super::{OracleError, OracleEstimate};
use crate::closedform::{
    c_gw, c_minkowski, integral_i1, integral_i2, integral_i3, integral_i4, transition_probability, x_gw, x_minkowski,
    ClosedFormError,
};
use crate::model::{DimensionlessParams, ModelError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// Ratio between the tolerance for regulator-free oracles and regulated ones.
pub const SMOOTH_TOLERANCE_RATIO: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Quantity {
    P,
    XM,
    XMSubtraction,
    CM,
    I1,
    I2,
    I3,
    I4,
    PFullWightman,
    XGwFullWightman,
    CGwFullWightman,
}

impl Quantity {
    pub const ALL: [Quantity; 11] = [
        Quantity::P,
        Quantity::XM,
        Quantity::XMSubtraction,
        Quantity::CM,
        Quantity::I1,
        Quantity::I2,
        Quantity::I3,
        Quantity::I4,
        Quantity::PFullWightman,
        Quantity::XGwFullWightman,
        Quantity::CGwFullWightman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::P => "P",
            Quantity::XM => "X_M",
            Quantity::XMSubtraction => "X_M(subtraction)",
            Quantity::CM => "C_M",
            Quantity::I1 => "I1",
            Quantity::I2 => "I2",
            Quantity::I3 => "I3",
            Quantity::I4 => "I4",
            Quantity::PFullWightman => "P(full W)",
            Quantity::XGwFullWightman => "X_GW(full W)",
            Quantity::CGwFullWightman => "C_GW(full W)",
        }
    }

    /// Whether the oracle needs no regulator and so is held to the tighter tolerance.
    pub fn is_smooth(self) -> bool {
        matches!(self, Quantity::I2 | Quantity::I4 | Quantity::XMSubtraction)
    }

    /// Parameters the quantity depends on, as (omega, Omega, D, t0, A) flags.
    fn dependence(self) -> [bool; 5] {
        match self {
            Quantity::P => [false, true, false, false, false],
            Quantity::XM | Quantity::XMSubtraction => [false, true, true, true, false],
            Quantity::CM => [false, true, true, false, false],
            Quantity::I1 | Quantity::I2 => [true, false, true, false, false],
            Quantity::I3 | Quantity::I4 => [true, true, true, false, false],
            Quantity::PFullWightman => [true, true, false, true, true],
            Quantity::XGwFullWightman | Quantity::CGwFullWightman => [true, true, true, true, false],
        }
    }
}

/// Cartesian grid of oracle checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyGrid {
    pub omega_sigma: Vec<f64>,
    pub gap_omega_sigma: Vec<f64>,
    pub d_sigma: Vec<f64>,
    pub t0_sigma: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub quantities: Vec<Quantity>,
}

impl VerifyGrid {
    /// The acceptance grid: three frequencies, three gaps, four separations,
    /// two centres. The amplitudes only reach the full-Wightman P check.
    pub fn default_grid() -> Self {
        VerifyGrid {
            omega_sigma: vec![0.5, 2.0, 5.0],
            gap_omega_sigma: vec![0.5, 1.0, 1.5],
            d_sigma: vec![0.5, 1.0, 2.0, 4.0],
            t0_sigma: vec![0.0, 1.0],
            amplitude: vec![0.0, 0.05, 0.1],
            quantities: Quantity::ALL.to_vec(),
        }
    }

    /// One point per quantity.
    pub fn minimal() -> Self {
        VerifyGrid {
            omega_sigma: vec![2.0],
            gap_omega_sigma: vec![1.0],
            d_sigma: vec![1.0],
            t0_sigma: vec![0.0],
            amplitude: vec![0.0],
            quantities: Quantity::ALL.to_vec(),
        }
    }

    pub fn empty() -> Self {
        VerifyGrid {
            omega_sigma: vec![],
            gap_omega_sigma: vec![],
            d_sigma: vec![],
            t0_sigma: vec![],
            amplitude: vec![],
            quantities: Quantity::ALL.to_vec(),
        }
    }

    pub fn with_quantities(mut self, quantities: &[Quantity]) -> Self {
        self.quantities = quantities.to_vec();
        self
    }

    /// Distinct (quantity, point) pairs after dropping parameters the quantity ignores.
    pub fn checks(&self) -> Vec<(Quantity, DimensionlessParams)> {
        let mut out = Vec::new();
        for &q in &self.quantities {
            let dep = q.dependence();
            let mut seen = BTreeSet::new();
            for &w in &self.omega_sigma {
                for &g in &self.gap_omega_sigma {
                    for &d in &self.d_sigma {
                        for &t0 in &self.t0_sigma {
                            for &a in &self.amplitude {
                                let key: Vec<u64> = [w, g, d, t0, a]
                                    .iter()
                                    .zip(dep)
                                    .map(|(v, used)| if used { v.to_bits() } else { 0 })
                                    .collect();
                                if seen.insert(key) {
                                    out.push((q, DimensionlessParams::new(a, w, g, d, t0)));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One closed-form-versus-oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub quantity: Quantity,
    pub omega_sigma: f64,
    #[serde(rename = "Omega_sigma")]
    pub gap_omega_sigma: f64,
    #[serde(rename = "D_sigma")]
    pub d_sigma: f64,
    pub t0_sigma: f64,
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub closed: [f64; 2],
    pub oracle: [f64; 2],
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub oracle_error_estimate: f64,
    pub oracle_converged: bool,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub calibration: Result<(), String>,
    pub records: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.calibration.is_ok() && self.records.iter().all(|r| r.pass)
    }

    pub fn summary(&self) -> VerifySummary {
        let passed = self.records.iter().filter(|r| r.pass).count();
        VerifySummary { total: self.records.len(), passed, failed: self.records.len() - passed }
    }

    /// Fixed-width table, one line per check.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "{:<17} {:>6} {:>6} {:>6} {:>6} {:>24} {:>24} {:>10}  {}\n",
            "quantity", "omega", "Omega", "D", "t0", "closed", "oracle", "rel_dev", "result"
        ));
        for r in &self.records {
            let fmt_c = |v: [f64; 2]| format!("{:.10e}{:+.2e}i", v[0], v[1]);
            let result = match (&r.error, r.pass) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "PASS".to_string(),
                (None, false) => "FAIL".to_string(),
            };
            s.push_str(&format!(
                "{:<17} {:>6} {:>6} {:>6} {:>6} {:>24} {:>24} {:>10.2e}  {}\n",
                r.quantity.name(),
                r.omega_sigma,
                r.gap_omega_sigma,
                r.d_sigma,
                r.t0_sigma,
                fmt_c(r.closed),
                fmt_c(r.oracle),
                r.rel_deviation,
                result
            ));
        }
        let sum = self.summary();
        if let Err(e) = &self.calibration {
            s.push_str(&format!("calibration FAILED: {e}\n"));
        }
        s.push_str(&format!("{} checks, {} passed, {} failed\n", sum.total, sum.passed, sum.failed));
        s
    }
}

#[derive(Debug)]
enum CheckFailure {
    Closed(ClosedFormError),
    Oracle(OracleError),
}

impl From<ModelError> for CheckFailure {
    fn from(e: ModelError) -> Self {
        CheckFailure::Closed(e.into())
    }
}
impl From<ClosedFormError> for CheckFailure {
    fn from(e: ClosedFormError) -> Self {
        CheckFailure::Closed(e)
    }
}
impl From<OracleError> for CheckFailure {
    fn from(e: OracleError) -> Self {
        CheckFailure::Oracle(e)
    }
}

fn evaluate(
    q: Quantity,
    p: &DimensionlessParams,
    tol: f64,
    s: &OracleSettings,
) -> Result<(Complex64, OracleEstimate), CheckFailure> {
    let det = &p.detector;
    let pair = &p.pair;
    let w = p.gw.omega_sigma;
    crate::model::check_geometry(pair)?;
    let real = |x: f64| Complex64::new(x, 0.0);
    Ok(match q {
        Quantity::P => (real(transition_probability(det)), oracle_p_with(det, tol, s)?),
        Quantity::XM => (x_minkowski(det, pair)?, oracle_xm_with(det, pair, tol, s)?),
        Quantity::XMSubtraction => (x_minkowski(det, pair)?, oracle_xm_subtraction_with(det, pair, tol, s)?),
        Quantity::CM => (c_minkowski(det, pair)?, oracle_cm_with(det, pair, tol, s)?),
        Quantity::I1 => (integral_i1(w, pair)?, oracle_delta_prime_with(DeltaPrimeTarget::I1, w, det, pair, tol, s)?),
        Quantity::I2 => (integral_i2(w, pair)?, oracle_i2(w, pair, tol)?),
        Quantity::I3 => {
            (real(integral_i3(w, det, pair)?), oracle_delta_prime_with(DeltaPrimeTarget::I3, w, det, pair, tol, s)?)
        }
        Quantity::I4 => (real(integral_i4(w, det, pair)?), oracle_i4(w, det, pair, tol)?),
        Quantity::PFullWightman => (real(transition_probability(det)), oracle_full_p_with(p, tol, s)?),
        Quantity::XGwFullWightman => (x_gw(p)?, oracle_full_x_gw_with(p, tol, s)?),
        Quantity::CGwFullWightman => (c_gw(p)?, oracle_full_c_gw_with(p, tol, s)?),
    })
}

/// Relative deviation, falling back to absolute when the reference is zero.
pub fn relative_deviation(closed: Complex64, oracle: Complex64) -> f64 {
    let d = (oracle - closed).norm();
    if closed.norm() > 0.0 {
        d / closed.norm()
    } else {
        d
    }
}

pub fn run_check(q: Quantity, p: &DimensionlessParams, tol: f64, settings: &OracleSettings) -> CheckRecord {
    let tol = if q.is_smooth() { tol * SMOOTH_TOLERANCE_RATIO } else { tol };
    let mut rec = CheckRecord {
        quantity: q,
        omega_sigma: p.gw.omega_sigma,
        gap_omega_sigma: p.detector.gap_omega_sigma,
        d_sigma: p.pair.d_sigma,
        t0_sigma: p.detector.t0_sigma,
        amplitude: p.gw.amplitude_a,
        closed: [f64::NAN; 2],
        oracle: [f64::NAN; 2],
        abs_deviation: f64::NAN,
        rel_deviation: f64::NAN,
        oracle_error_estimate: f64::NAN,
        oracle_converged: false,
        tolerance: tol,
        pass: false,
        error: None,
    };
    match evaluate(q, p, tol, settings) {
        Ok((closed, est)) => {
            rec.closed = [closed.re, closed.im];
            rec.oracle = [est.value.re, est.value.im];
            rec.abs_deviation = (est.value - closed).norm();
            rec.rel_deviation = relative_deviation(closed, est.value);
            rec.oracle_error_estimate = est.abs_error_estimate;
            rec.oracle_converged = est.converged;
            rec.pass = rec.rel_deviation <= tol;
        }
        Err(CheckFailure::Closed(e)) => rec.error = Some(e.to_string()),
        Err(CheckFailure::Oracle(e)) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Runs every oracle against its closed form on the grid, in parallel, with
/// records in grid order. Regulated oracles use `tol`, regulator-free ones
/// `tol * SMOOTH_TOLERANCE_RATIO`.
pub fn verify_suite(grid: &VerifyGrid, tol: f64) -> VerifyReport {
    verify_suite_with(grid, tol, &OracleSettings::default())
}

pub fn verify_suite_with(grid: &VerifyGrid, tol: f64, settings: &OracleSettings) -> VerifyReport {
    let checks = grid.checks();
    if checks.is_empty() {
        return VerifyReport { tolerance: tol, calibration: Ok(()), records: vec![] };
    }
    let calibration = calibrate_epsilon_convention(tol.max(1e-5), settings).map(|_| ()).map_err(|e| e.to_string());
    let records = checks.par_iter().map(|(q, p)| run_check(*q, p, tol, settings)).collect();
    VerifyReport { tolerance: tol, calibration, records }
}

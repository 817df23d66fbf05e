//! Physical configuration in units of the switching width.
//!
//! Every length and time is measured in units of sigma and every frequency in
//! units of 1/sigma, so sigma itself never appears.

mod config;

pub use config::{load_config, parse_config, ConfigError, ParamKey, ParamOverrides};

use thiserror::Error;

/// Soft limit on the strain amplitude; results are first order in `A`.
pub const MAX_LINEAR_AMPLITUDE: f64 = 0.1;
/// Soft limit on `|Omega sigma|` for the perturbative expansion.
pub const MAX_GAP: f64 = 2.0;

/// Plane gravitational wave with + polarization travelling along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwBackground {
    pub amplitude_a: f64,
    pub omega_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Energy gap times sigma. Negative values describe detectors prepared in
    /// the excited state.
    pub gap_omega_sigma: f64,
    /// Centre of the Gaussian switching window.
    pub t0_sigma: f64,
    /// Coupling strength. Only used when a concrete state is assembled.
    pub coupling_lambda: f64,
}

/// Axis along which the two detectors are separated.
///
/// Only `X` is backed by the reference derivation. `Y` is experimental: it
/// flips the sign of the gravitational-wave correction through the
/// `dx^2 - dy^2` factor and is not independently verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationAxis {
    #[default]
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub d_sigma: f64,
    pub axis: SeparationAxis,
}

impl PairGeometry {
    pub fn along_x(d_sigma: f64) -> Self {
        PairGeometry { d_sigma, axis: SeparationAxis::X }
    }

    /// Separations beyond one switching width are treated as approximately spacelike.
    pub fn is_approximately_spacelike(&self) -> bool {
        is_approximately_spacelike(self.d_sigma)
    }
}

pub fn is_approximately_spacelike(d_sigma: f64) -> bool {
    d_sigma > 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub gw: GwBackground,
    pub detector: DetectorParams,
    pub pair: PairGeometry,
}

impl Default for DimensionlessParams {
    fn default() -> Self {
        DimensionlessParams {
            gw: GwBackground { amplitude_a: 0.0, omega_sigma: 2.0 },
            detector: DetectorParams { gap_omega_sigma: 1.0, t0_sigma: 0.0, coupling_lambda: 1.0 },
            pair: PairGeometry::along_x(2.0),
        }
    }
}

impl DimensionlessParams {
    pub fn new(a: f64, omega_sigma: f64, gap_omega_sigma: f64, d_sigma: f64, t0_sigma: f64) -> Self {
        DimensionlessParams {
            gw: GwBackground { amplitude_a: a, omega_sigma },
            detector: DetectorParams { gap_omega_sigma, t0_sigma, coupling_lambda: 1.0 },
            pair: PairGeometry::along_x(d_sigma),
        }
    }

    pub fn get(&self, key: ParamKey) -> f64 {
        match key {
            ParamKey::A => self.gw.amplitude_a,
            ParamKey::OmegaSigma => self.gw.omega_sigma,
            ParamKey::GapOmegaSigma => self.detector.gap_omega_sigma,
            ParamKey::DSigma => self.pair.d_sigma,
            ParamKey::T0Sigma => self.detector.t0_sigma,
            ParamKey::Lambda => self.detector.coupling_lambda,
        }
    }

    pub fn set(&mut self, key: ParamKey, value: f64) {
        match key {
            ParamKey::A => self.gw.amplitude_a = value,
            ParamKey::OmegaSigma => self.gw.omega_sigma = value,
            ParamKey::GapOmegaSigma => self.detector.gap_omega_sigma = value,
            ParamKey::DSigma => self.pair.d_sigma = value,
            ParamKey::T0Sigma => self.detector.t0_sigma = value,
            ParamKey::Lambda => self.detector.coupling_lambda = value,
        }
    }

    pub fn with(mut self, key: ParamKey, value: f64) -> Self {
        self.set(key, value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationWarning {
    /// `A > 0.1`: second-order terms in the amplitude may dominate.
    AmplitudeBeyondLinearRegime { a: f64 },
    /// `|Omega sigma| >= 2`: outside the regime where the expansion is trusted.
    GapBeyondValidity { gap_omega_sigma: f64 },
    /// `omega sigma < 0`: evaluated as `|omega sigma|`, the kernel being even in omega.
    NegativeFrequency { omega_sigma: f64 },
    /// The pair is separated along y, which is unverified.
    ExperimentalSeparationAxis,
}

impl std::fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationWarning::AmplitudeBeyondLinearRegime { a } => {
                write!(
                    f,
                    "AmplitudeBeyondLinearRegime: A = {a} exceeds {MAX_LINEAR_AMPLITUDE}; results are first order in A"
                )
            }
            ValidationWarning::GapBeyondValidity { gap_omega_sigma } => {
                write!(f, "GapBeyondValidity: |Omega_sigma| = {} is not below {MAX_GAP}", gap_omega_sigma.abs())
            }
            ValidationWarning::NegativeFrequency { omega_sigma } => {
                write!(f, "NegativeFrequency: omega_sigma = {omega_sigma} evaluated as {}", omega_sigma.abs())
            }
            ValidationWarning::ExperimentalSeparationAxis => {
                write!(f, "ExperimentalSeparationAxis: y-separated pairs are not verified")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("InvalidGeometry: D_sigma must be positive, got {d_sigma}")]
    InvalidGeometry { d_sigma: f64 },
    #[error("InvalidCoupling: lambda must be positive, got {lambda}")]
    InvalidCoupling { lambda: f64 },
    #[error("NonFinite: parameter {name} is {value}")]
    NonFinite { name: &'static str, value: f64 },
}

impl ModelError {
    /// Short machine-readable tag, used in CSV status cells.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelError::InvalidGeometry { .. } => "InvalidGeometry",
            ModelError::InvalidCoupling { .. } => "InvalidCoupling",
            ModelError::NonFinite { .. } => "NonFinite",
        }
    }
}

pub fn check_geometry(pair: &PairGeometry) -> Result<(), ModelError> {
    if !pair.d_sigma.is_finite() {
        return Err(ModelError::NonFinite { name: ParamKey::DSigma.name(), value: pair.d_sigma });
    }
    if pair.d_sigma <= 0.0 {
        return Err(ModelError::InvalidGeometry { d_sigma: pair.d_sigma });
    }
    Ok(())
}

/// Checks hard limits (errors) and soft limits (warnings).
pub fn validate(p: &DimensionlessParams) -> Result<Vec<ValidationWarning>, ModelError> {
    for key in ParamKey::ALL {
        let value = p.get(key);
        if !value.is_finite() {
            return Err(ModelError::NonFinite { name: key.name(), value });
        }
    }
    check_geometry(&p.pair)?;
    if p.detector.coupling_lambda <= 0.0 {
        return Err(ModelError::InvalidCoupling { lambda: p.detector.coupling_lambda });
    }
    let mut warnings = Vec::new();
    if p.gw.amplitude_a > MAX_LINEAR_AMPLITUDE {
        warnings.push(ValidationWarning::AmplitudeBeyondLinearRegime { a: p.gw.amplitude_a });
    }
    if p.detector.gap_omega_sigma.abs() >= MAX_GAP {
        warnings.push(ValidationWarning::GapBeyondValidity { gap_omega_sigma: p.detector.gap_omega_sigma });
    }
    if p.gw.omega_sigma < 0.0 {
        warnings.push(ValidationWarning::NegativeFrequency { omega_sigma: p.gw.omega_sigma });
    }
    if p.pair.axis == SeparationAxis::Y {
        warnings.push(ValidationWarning::ExperimentalSeparationAxis);
    }
    Ok(warnings)
}

/// Event in Minkowski space, coordinates in units of sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimePoint { t, x, y, z }
    }

    pub fn u(&self) -> f64 {
        self.t - self.z
    }

    pub fn v(&self) -> f64 {
        self.t + self.z
    }
}

/// Squared Minkowski interval `-du dv + dx^2 + dy^2`; positive for spacelike pairs.
pub fn geodesic_interval(a: SpacetimePoint, b: SpacetimePoint) -> f64 {
    let du = a.u() - b.u();
    let dv = a.v() - b.v();
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    -du * dv + dx * dx + dy * dy
}

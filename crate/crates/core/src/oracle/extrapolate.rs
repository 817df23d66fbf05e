//! Regulator schedules and polynomial extrapolation to zero regulator.

use super::OracleError;
use num_complex::Complex64;

/// Decreasing regulator values and the polynomial order used to remove them.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatorSchedule {
    values: Vec<f64>,
    extrapolation_order: usize,
}

impl RegulatorSchedule {
    /// Needs at least `order + 2` strictly decreasing positive values: the
    /// last `order + 1` give the estimate, the window shifted by one gives
    /// the error estimate.
    pub fn new(values: Vec<f64>, extrapolation_order: usize) -> Result<Self, OracleError> {
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        let positive = values.iter().all(|&v| v > 0.0 && v.is_finite());
        if !decreasing || !positive || values.len() < extrapolation_order + 2 {
            return Err(OracleError::InvalidSchedule { values, extrapolation_order });
        }
        Ok(RegulatorSchedule { values, extrapolation_order })
    }

    /// Geometric schedule `start, start/2, ...` with `count` entries.
    pub fn halving(start: f64, count: usize, extrapolation_order: usize) -> Result<Self, OracleError> {
        let values = (0..count).map(|k| start / f64::from(1u32 << k)).collect();
        Self::new(values, extrapolation_order)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn extrapolation_order(&self) -> usize {
        self.extrapolation_order
    }

    /// The schedule with one more halving step appended.
    pub fn refined(&self) -> Self {
        let mut values = self.values.clone();
        values.push(values[values.len() - 1] / 2.0);
        RegulatorSchedule { values, extrapolation_order: self.extrapolation_order }
    }
}

impl Default for RegulatorSchedule {
    /// Five halvings from 0.1 with a cubic fit; see the crate README for the
    /// accuracy this buys.
    fn default() -> Self {
        RegulatorSchedule::halving(0.1, 5, 3).expect("valid default schedule")
    }
}

/// Value at `t = 0` of the interpolating polynomial through `(t_i, y_i)` (Neville).
pub fn neville_at_zero(t: &[f64], y: &[Complex64]) -> Complex64 {
    assert_eq!(t.len(), y.len());
    let mut p: Vec<Complex64> = y.to_vec();
    let n = t.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * t[i] - p[i] * t[i + m]) / (t[i] - t[i + m]);
        }
    }
    p[0]
}

/// Extrapolates a regulated sequence. `abscissa` maps a regulator to the
/// expansion variable (identity for all-power expansions, square for even ones).
/// Returns `(value, error_estimate)`.
pub fn extrapolate(
    schedule: &RegulatorSchedule,
    sequence: &[Complex64],
    abscissa: impl Fn(f64) -> f64,
) -> (Complex64, f64) {
    let t: Vec<f64> = schedule.values.iter().map(|&v| abscissa(v)).collect();
    let k = schedule.extrapolation_order + 1;
    let n = t.len();
    let best = neville_at_zero(&t[n - k..], &sequence[n - k..]);
    let previous = neville_at_zero(&t[n - k - 1..n - 1], &sequence[n - k - 1..n - 1]);
    (best, (best - previous).norm())
}

use super::ClosedFormError;
use num_complex::Complex64;

/// Two-detector reduced state in the basis `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorDensityMatrix {
    pub entries: [[Complex64; 4]; 4],
}

impl DetectorDensityMatrix {
    /// Builds the X-shaped state from the unnormalized `P`, `X` and `C`.
    pub fn from_parts(p: f64, x: Complex64, c: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let mut e = [[zero; 4]; 4];
        e[0][0] = Complex64::new(1.0 - 2.0 * p, 0.0);
        e[1][1] = Complex64::new(p, 0.0);
        e[2][2] = Complex64::new(p, 0.0);
        e[0][3] = x;
        e[3][0] = x.conj();
        e[1][2] = c;
        e[2][1] = c.conj();
        DetectorDensityMatrix { entries: e }
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order, from the two decoupled 2x2 blocks.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = &self.entries;
        let mut out = [0.0; 4];
        let (lo, hi) = block_eigenvalues(e[0][0].re, e[3][3].re, e[0][3]);
        out[0] = lo;
        out[1] = hi;
        let (lo, hi) = block_eigenvalues(e[1][1].re, e[2][2].re, e[1][2]);
        out[2] = lo;
        out[3] = hi;
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Eigenvalues of the Hermitian block `[[a, b], [conj b, d]]`, computed so
/// that a small eigenvalue keeps its relative accuracy.
fn block_eigenvalues(a: f64, d: f64, b: Complex64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    let big = if mean >= 0.0 { mean + radius } else { mean - radius };
    if big == 0.0 {
        return (0.0, 0.0);
    }
    // product of eigenvalues is the determinant
    let det = a * d - b.norm_sqr();
    let small = det / big;
    if big >= small {
        (small, big)
    } else {
        (big, small)
    }
}

/// Concurrence of the state at leading order, `2 max(0, |X| - P)`.
pub fn leading_concurrence(theta: f64) -> f64 {
    2.0 * theta.max(0.0)
}

pub(super) fn check_positive(rho: &DetectorDensityMatrix, lambda: f64) -> Result<(), ClosedFormError> {
    let tolerance = 10.0 * lambda.powi(4);
    let min = rho.min_eigenvalue();
    if min < -tolerance {
        return Err(ClosedFormError::StateInvalid { min_eigenvalue: min, tolerance });
    }
    Ok(())
}

//! Globally adaptive 21-point Gauss-Kronrod quadrature for complex integrands.

use super::OracleError;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Gauss-Kronrod 10/21 nodes and weights, quoted at full published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_376_484,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadOptions {
    pub fn absolute(tol: f64) -> Self {
        QuadOptions { abs_tol: tol, rel_tol: 0.0, max_subdivisions: 4000 }
    }

    pub fn relative(tol: f64) -> Self {
        QuadOptions { abs_tol: 0.0, rel_tol: tol, max_subdivisions: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    /// Integral of |f|, the scale against which roundoff is judged.
    pub abs_integral: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs_integral: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    let fc = f(centr);
    let mut resg = Complex64::new(0.0, 0.0);
    let mut resk = fc * WGK[10];
    let mut resabs = WGK[10] * fc.norm();
    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let (f1, f2) = (f(centr - absc), f(centr + absc));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += (f1 + f2) * wg;
        resk += (f1 + f2) * WGK[jtw];
        resabs += WGK[jtw] * (f1.norm() + f2.norm());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let (f1, f2) = (f(centr - absc), f(centr + absc));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += (f1 + f2) * WGK[jtwm1];
        resabs += WGK[jtwm1] * (f1.norm() + f2.norm());
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let h = hlgth.abs();
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * hlgth).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Segment { a, b, value: resk * hlgth, error: err, abs_integral: resabs }
}

/// Integrates `f` over `[a, b]` split at the given interior breakpoints.
///
/// Both ends must be finite; see [`quad_adaptive`] for infinite ranges.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult, OracleError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(OracleError::InvalidRange { a, b });
    }
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), abs_error: 0.0, abs_integral: 0.0, evaluations: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = vec![lo];
    nodes.extend(cuts);
    nodes.push(hi);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in nodes.windows(2) {
        heap.push(gk21(&f, w[0], w[1]));
        evaluations += 21;
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        heap.iter()
            .fold((Complex64::new(0.0, 0.0), 0.0, 0.0), |(v, e, r), s| (v + s.value, e + s.error, r + s.abs_integral))
    };
    let mut subdivisions = 0;
    loop {
        let (value, error, abs_integral) = totals(&heap);
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        let floor = 50.0 * f64::EPSILON * abs_integral;
        // At the roundoff floor further bisection cannot help; the error
        // reported back still says how good the value is.
        if error <= target || error <= 2.0 * floor {
            return Ok(QuadResult { value: value * sign, abs_error: error, abs_integral, evaluations });
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(OracleError::NoConvergence { value: value * sign, abs_error: error, evaluations });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(OracleError::NoConvergence { value: value * sign, abs_error: error, evaluations });
        }
        heap.push(gk21(&f, worst.a, mid));
        heap.push(gk21(&f, mid, worst.b));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Adaptive quadrature with absolute tolerance `tol`.
///
/// Infinite limits are mapped onto a finite interval by `x = a + t/(1-t)`,
/// which suits integrands with at least exponential decay.
pub fn quad_adaptive<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult, OracleError> {
    let opts = QuadOptions::absolute(tol);
    match (a.is_finite(), b.is_finite()) {
        (true, true) => integrate(f, a, b, &[], opts),
        (true, false) if b > 0.0 => half_line(|x| f(a + x), opts),
        (false, true) if a < 0.0 => half_line(|x| f(b - x), opts),
        (false, false) if a < 0.0 && b > 0.0 => {
            let half = QuadOptions::absolute(0.5 * tol);
            let left = half_line(|x| f(-x), half)?;
            let right = half_line(&f, half)?;
            Ok(QuadResult {
                value: left.value + right.value,
                abs_error: left.abs_error + right.abs_error,
                abs_integral: left.abs_integral + right.abs_integral,
                evaluations: left.evaluations + right.evaluations,
            })
        }
        _ => Err(OracleError::InvalidRange { a, b }),
    }
}

/// `int_0^inf f` through `x = t/(1-t)`.
fn half_line<F: Fn(f64) -> Complex64>(f: F, opts: QuadOptions) -> Result<QuadResult, OracleError> {
    let g = |t: f64| {
        if t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = 1.0 - t;
        f(t / s) / (s * s)
    };
    integrate(g, 0.0, 1.0, &[], opts)
}

/// Distance `r` from the centre of `exp(-rate x^2)` beyond which the one-sided
/// tail of `envelope(r) exp(-rate x^2)` integrates to less than `tol / 10`.
///
/// `envelope` must bound the remaining integrand factor and grow at most
/// polynomially.
pub fn gaussian_tail_radius(rate: f64, tol: f64, envelope: impl Fn(f64) -> f64) -> f64 {
    let target = 0.1 * tol;
    let mut r = (1.0 / rate).sqrt();
    loop {
        // int_r^inf exp(-rate x^2) dx <= exp(-rate r^2) / (2 rate r); the envelope
        // is evaluated a little further out to absorb its growth.
        let bound = envelope(2.0 * r) * (-rate * r * r).exp() / (2.0 * rate * r);
        if bound < target || r > 1e3 {
            return r;
        }
        r *= 1.05;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        for k in 0..=30 {
            let s = gk21(&|x: f64| Complex64::new(x.powi(k), 0.0), -1.0, 1.0);
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((s.value.re - exact).abs() < 1e-14, "k = {k}");
        }
        let wsum: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        assert!((wsum - 2.0).abs() < 1e-15);
        assert!((2.0 * WG.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_half_line() {
        let r = quad_adaptive(|x| Complex64::new((-x * x).exp(), 0.0), 0.0, f64::INFINITY, 1e-13).unwrap();
        assert!((r.value.re - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn breakpoints_and_reversed_limits() {
        let f = |x: f64| Complex64::new(x.abs(), 0.0);
        let r = integrate(f, 1.0, -1.0, &[0.0], QuadOptions::absolute(1e-14)).unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 0.0, max_subdivisions: 3 };
        let r = integrate(|x: f64| Complex64::new((1.0 / x).sin(), 0.0), 1e-6, 1.0, &[], opts);
        assert!(matches!(r, Err(OracleError::NoConvergence { .. })));
    }

    #[test]
    fn tail_radius_is_enough() {
        let r = gaussian_tail_radius(1.0, 1e-12, |_| 1.0);
        assert!((-r * r).exp() / (2.0 * r) < 1e-13);
        assert!(r < 6.0);
    }
}

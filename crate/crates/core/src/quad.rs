//! Numerical integration engines shared by the analytic pipelines and the oracles.
//!
//! * [`integrate`]: globally adaptive Gauss-Kronrod (10/21 point) on a finite interval.
//! * [`ray_integral`]: integrals over the whole log-scale line `u = ln r`, which is
//!   how every branch-cut integral in the crate is parameterised. Both half lines are
//!   mapped by `u = ±(e^v - 1)` so exponential decay in `u` becomes double-exponential
//!   in `v` and algebraic decay becomes exponential; the half lines are then marched
//!   panel by panel until a geometric tail estimate drops below the tolerance.
//! * [`oscillatory_cosine`]: `∫_0^∞ cos(κx) g(κ) dκ` for slowly decaying `g`, by
//!   summing half-period panels and extrapolating with Wynn's epsilon algorithm.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Outcome of a quadrature: value, error estimate and the number of integrand calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub abs_error: f64,
    /// Estimate of `∫|f|`, used for cancellation diagnostics and tail tests.
    pub abs_mass: f64,
    pub evals: usize,
    pub converged: bool,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_980_931,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    mass: f64,
}

fn gk21<T, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut mass = fc.magnitude() * WGK[10];
    let mut samples = [T::default(); 21];
    samples[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        samples[j] = f1;
        samples[20 - j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        mass += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    // QUADPACK-style error scaling.
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for j in 0..10 {
        asc += ((samples[j] - mean).magnitude() + (samples[20 - j] - mean).magnitude()) * WGK[j];
    }
    let asc = asc * half.abs();
    let mass = mass * half.abs();
    let value = kronrod * half;
    let raw = (kronrod - gauss).magnitude() * half.abs();
    let mut error = raw;
    if asc > 0.0 && raw > 0.0 {
        error = asc * (200.0 * raw / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * mass;
    if floor > error {
        error = floor;
    }
    if !value.magnitude().is_finite() || !error.is_finite() {
        return Err(Error::Quadrature {
            what: format!("non-finite integrand on [{a}, {b}]"),
            estimate: f64::INFINITY,
            tol: 0.0,
        });
    }
    Ok(Segment { a, b, value, error, mass })
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` on `[a, b]`.
///
/// Bisects the segment with the largest error until the total error estimate is
/// below `max(abs_tol, rel_tol·|I|)` or `max_segments` is reached. Non-convergence is
/// reported through `converged = false`, never as an error; integrand errors are
/// propagated.
pub fn integrate<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    if a == b {
        return Ok(QuadResult { value: T::default(), abs_error: 0.0, abs_mass: 0.0, evals: 0, converged: true });
    }
    let mut segments = vec![gk21(&mut f, a, b)?];
    let mut evals = 21;
    loop {
        let (value, error) = segments.iter().fold((T::default(), 0.0), |(v, e), s| (v + s.value, e + s.error));
        let target = abs_tol.max(rel_tol * value.magnitude());
        let worst =
            segments.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).map(|(i, _)| i).unwrap_or(0);
        let width = segments[worst].b - segments[worst].a;
        let too_narrow = width.abs() <= 1e-13 * (segments[worst].a.abs() + segments[worst].b.abs()).max(1e-300);
        if error <= target || segments.len() >= max_segments || too_narrow {
            let mass = segments.iter().map(|s| s.mass).sum();
            return Ok(QuadResult { value, abs_error: error, abs_mass: mass, evals, converged: error <= target });
        }
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        segments.push(gk21(&mut f, seg.a, mid)?);
        segments.push(gk21(&mut f, mid, seg.b)?);
        evals += 42;
    }
}

/// Tuning for [`ray_integral`].
#[derive(Debug, Clone, Copy)]
pub struct RayOptions {
    /// Panel width in the mapped variable `v`.
    pub panel: f64,
    /// Minimum number of panels per half line before the tail test may stop marching.
    pub min_panels: usize,
    /// Hard cap on panels per half line.
    pub max_panels: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self { panel: 0.5, min_panels: 6, max_panels: 400 }
    }
}

/// `∫_{-∞}^{∞} g(u) du` for integrands given on the log-scale line `u = ln r`.
///
/// `tol` is absolute. The error estimate includes the geometric tail bound of the
/// truncated half lines.
pub fn ray_integral<F>(mut g: F, tol: f64, opts: RayOptions) -> Result<QuadResult<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut total = QuadResult { value: 0.0, abs_error: 0.0, abs_mass: 0.0, evals: 0, converged: true };
    for side in [1.0_f64, -1.0] {
        let half = march_half_line(&mut g, side, tol * 0.5, opts)?;
        total.value += half.value;
        total.abs_error += half.abs_error;
        total.abs_mass += half.abs_mass;
        total.evals += half.evals;
        total.converged &= half.converged;
    }
    Ok(total)
}

fn march_half_line<F>(g: &mut F, side: f64, tol: f64, opts: RayOptions) -> Result<QuadResult<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    // u = side·(e^v − 1), du = e^v dv.
    let mut mapped = |v: f64| -> Result<f64> {
        let ev = v.exp();
        let u = side * (ev - 1.0);
        let val = g(u)?;
        Ok(if val == 0.0 { 0.0 } else { val * ev })
    };
    let panel_tol = tol / 32.0;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut mass_total = 0.0;
    let mut evals = 0;
    let mut converged = true;
    let mut prev_mass = f64::INFINITY;
    let mut tail = f64::INFINITY;
    // Integrands concentrated far out on the line are zero on the first panels;
    // a zero panel only ends the march once the support has been seen.
    let mut seen_support = false;
    for j in 0..opts.max_panels {
        let a = j as f64 * opts.panel;
        let b = a + opts.panel;
        let r = integrate(&mut mapped, a, b, panel_tol, 1e-14, 200)?;
        value += r.value;
        error += r.abs_error;
        mass_total += r.abs_mass;
        evals += r.evals;
        converged &= r.converged;
        let mass = r.abs_mass;
        seen_support |= mass > 0.0;
        if j + 1 >= opts.min_panels && seen_support {
            if mass == 0.0 {
                tail = 0.0;
                break;
            }
            let q = mass / prev_mass;
            if q < 0.9 {
                let est = mass * q / (1.0 - q);
                if est <= tol * 0.1 && mass <= tol * 0.1 {
                    tail = est;
                    break;
                }
            }
        }
        prev_mass = mass;
    }
    if !seen_support {
        tail = 0.0;
    }
    if !tail.is_finite() {
        return Err(Error::Quadrature {
            what: "ray integral: half line did not decay within the panel budget".into(),
            estimate: prev_mass,
            tol,
        });
    }
    Ok(QuadResult {
        value,
        abs_error: error + tail,
        abs_mass: mass_total,
        evals,
        converged: converged && error + tail <= tol,
    })
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the extrapolated limit and the change between the two most recent
/// even-column estimates as an error indicator.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 | 2 => {
            let err = if n == 2 { (sums[1] - sums[0]).abs() } else { f64::INFINITY };
            return (sums[n - 1], err);
        }
        _ => {}
    }
    // Columns of the epsilon table; only even columns approximate the limit.
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut estimates = vec![sums[n - 2], sums[n - 1]];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            if diff == 0.0 {
                return finish(&estimates);
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        column += 1;
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        if column % 2 == 0 {
            estimates.push(next[next.len() - 1]);
        }
        prev = cur;
        cur = next;
    }
    finish(&estimates)
}

fn finish(estimates: &[f64]) -> (f64, f64) {
    let m = estimates.len();
    (estimates[m - 1], (estimates[m - 1] - estimates[m - 2]).abs())
}

/// `∫_0^∞ cos(κx) g(κ) dκ` for `x > 0` and `g` decaying at least like `1/κ`.
///
/// The range `[0, κ0]` is integrated adaptively; beyond it the integral is split at
/// consecutive zeros of `cos(κx)` and the alternating panel series is extrapolated
/// with [`wynn_epsilon`].
pub fn oscillatory_cosine<F>(mut g: F, x: f64, kappa0: f64, tol: f64) -> Result<QuadResult<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half_period = std::f64::consts::PI / x;
    // First zero of cos(κx) beyond kappa0.
    let n0 = ((kappa0 * x / std::f64::consts::PI) - 0.5).ceil().max(0.0);
    let start = (n0 + 0.5) * half_period;
    let mut integrand = |k: f64| -> Result<f64> { Ok((k * x).cos() * g(k)?) };
    let head = integrate(&mut integrand, 0.0, start, tol * 0.1, 1e-13, 2000)?;
    let mut evals = head.evals;
    let mut error = head.abs_error;
    let mut partial = head.value;
    let mut sums = Vec::new();
    let mut last_estimates: Vec<f64> = Vec::new();
    let mut a = start;
    for j in 0..200 {
        let b = a + half_period;
        let p = integrate(&mut integrand, a, b, tol * 0.01, 1e-13, 200)?;
        evals += p.evals;
        error += p.abs_error;
        partial += p.value;
        sums.push(partial);
        a = b;
        if j >= 6 {
            let (est, _) = wynn_epsilon(&sums);
            last_estimates.push(est);
            let m = last_estimates.len();
            if m >= 3 {
                let d1 = (last_estimates[m - 1] - last_estimates[m - 2]).abs();
                let d2 = (last_estimates[m - 2] - last_estimates[m - 3]).abs();
                let spread = d1.max(d2);
                if spread <= tol * 0.1 {
                    return Ok(QuadResult {
                        value: est,
                        abs_error: error + spread,
                        abs_mass: head.abs_mass,
                        evals,
                        converged: error + spread <= tol,
                    });
                }
            }
        }
    }
    Err(Error::Quadrature {
        what: format!("oscillatory cosine integral at x = {x}: extrapolation did not settle"),
        estimate: last_estimates.windows(2).last().map(|w| (w[1] - w[0]).abs()).unwrap_or(f64::INFINITY),
        tol,
    })
}

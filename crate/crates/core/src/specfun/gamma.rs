//! Gamma function family for real and complex arguments.
//!
//! Real arguments use Godfrey's Lanczos approximation (g = 607/128, 15 terms) on
//! `[1, 2]` with the recurrence to move there; complex arguments use the same
//! coefficients in logarithmic form.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;
const SQRT_2PI: f64 = 2.506_628_274_631_000_502_4;

// Multiplicative perturbation applied to every real Γ value. Zero in normal use;
// the verification harness sets it from a separate process to prove that its
// checks are sensitive to Γ.
static PERTURBATION: AtomicU64 = AtomicU64::new(0);

#[doc(hidden)]
pub fn set_test_perturbation(relative: f64) {
    PERTURBATION.store(relative.to_bits(), Ordering::Relaxed);
}

#[inline]
fn perturbation() -> f64 {
    f64::from_bits(PERTURBATION.load(Ordering::Relaxed))
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x.rem_euclid(2.0);
    // r in [0, 2)
    let (y, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if y == 0.0 {
        0.0
    } else if y <= 0.25 {
        (PI * y).sin()
    } else if y <= 0.75 {
        (PI * (0.5 - y)).cos()
    } else {
        (PI * (1.0 - y)).sin()
    };
    sign * v
}

/// `cos(πx)` with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_series(x: f64) -> f64 {
    // Γ(x) = sqrt(2π) · ser / x · t^{x+1/2} e^{-t}, t = x + g + 1/2
    let mut ser = LANCZOS[0];
    let mut y = x;
    for c in &LANCZOS[1..] {
        y += 1.0;
        ser += c / y;
    }
    ser
}

fn gamma_unperturbed(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unperturbed(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x < 12.0 {
        // Shift into [1, 2) where the Lanczos sum is most accurate.
        let mut z = x;
        let mut scale = 1.0;
        while z >= 2.0 {
            z -= 1.0;
            scale *= z;
        }
        while z < 1.0 {
            scale /= z;
            z += 1.0;
        }
        let t = z + LANCZOS_G + 0.5;
        let core = SQRT_2PI * lanczos_series(z) / z * ((z + 0.5) * t.ln() - t).exp();
        return core * scale;
    }
    let t = x + LANCZOS_G + 0.5;
    // Split the power to keep intermediates finite near the overflow threshold.
    let half = t.powf(0.5 * (x + 0.5));
    SQRT_2PI * lanczos_series(x) / x * half * (half * (-t).exp())
}

/// Γ(x) for real `x`; NaN at the poles.
pub fn gamma(x: f64) -> f64 {
    let g = gamma_unperturbed(x);
    let p = perturbation();
    if p == 0.0 {
        g
    } else {
        g * (1.0 + p)
    }
}

/// ln|Γ(x)| for real `x`; +∞ at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    let p = perturbation();
    let shift = if p == 0.0 { 0.0 } else { (1.0 + p).ln() };
    if x < 0.5 {
        // |Γ(x)| = π / (|sin πx| Γ(1-x))
        return PI.ln() - sin_pi(x).abs().ln() - ln_gamma(1.0 - x) + 2.0 * shift;
    }
    if x < 12.0 {
        return gamma(x).ln();
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (lanczos_series(x) / x).ln() + (x + 0.5) * t.ln() - t + shift
}

/// 1/Γ(x), exactly 0 at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    if x > 171.7 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// Reciprocal Gamma in logarithmic form, `(ln|1/Γ(x)|, sign)`, computed by upward
/// recurrence `1/Γ(x) = x(x+1)…(x+n-1) / Γ(x+n)` for negative arguments.
///
/// This path never uses the reflection formula, so it is an independent route to
/// the values produced by [`rgamma`]. Poles return `(-∞, 0.0)`.
pub fn ln_rgamma_recurrence(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x >= 1.0 {
        return (-ln_gamma(x), 1.0);
    }
    let mut log_prod = 0.0;
    let mut sign = 1.0;
    let mut z = x;
    while z < 1.0 {
        log_prod += z.abs().ln();
        if z < 0.0 {
            sign = -sign;
        }
        z += 1.0;
    }
    (log_prod - ln_gamma(z), sign)
}

/// `1/Γ(x)` by the same upward recurrence as [`ln_rgamma_recurrence`], multiplied
/// out directly while the product stays finite. Exactly 0 at the poles.
pub fn rgamma_recurrence(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x >= 1.0 {
        return rgamma(x);
    }
    if x < -150.0 {
        let (l, s) = ln_rgamma_recurrence(x);
        return s * l.exp();
    }
    let mut prod = 1.0;
    let mut z = x;
    while z < 1.0 {
        prod *= z;
        z += 1.0;
    }
    prod / gamma(z)
}

/// ln Γ(z) for complex `z` (principal branch up to multiples of 2πi, which is all
/// that matters after exponentiation).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let mut ser = Complex64::new(LANCZOS[0], 0.0);
    let mut y = z;
    for c in &LANCZOS[1..] {
        y += 1.0;
        ser += *c / y;
    }
    let t = z + (LANCZOS_G + 0.5);
    Complex64::new(LN_SQRT_2PI, 0.0) + (ser / z).ln() + (z + 0.5) * t.ln() - t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn integer_and_half_integer_values() {
        let mut fact = 1.0;
        for n in 1..25 {
            assert!(rel(gamma(n as f64), fact) < 1e-14, "n={n}");
            fact *= n as f64;
        }
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma(0.5), sqrt_pi) < 1e-15);
        assert!(rel(gamma(1.5), 0.5 * sqrt_pi) < 1e-15);
        assert!(rel(gamma(-0.5), -2.0 * sqrt_pi) < 1e-15);
    }

    #[test]
    fn reference_values() {
        // 30-digit references.
        let cases = [
            (0.25, 3.625_609_908_221_908_311_930_685_155_87),
            (0.75, 1.225_416_702_465_177_645_129_098_303_36),
            (1.25, 0.906_402_477_055_477_077_982_671_288_97),
            (3.375, 2.902_858_374_275_798_378_4),
            (-2.75, -1.004_497_983_230_312_259_6),
            (30.5, 4.822_696_933_490_908_601e31),
        ];
        for (x, want) in cases {
            assert!(rel(gamma(x), want) < 2e-14, "x={x}: {} vs {want}", gamma(x));
        }
    }

    #[test]
    fn poles() {
        assert!(gamma(0.0).is_nan());
        assert!(gamma(-3.0).is_nan());
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-7.0), 0.0);
        assert_eq!(ln_rgamma_recurrence(-2.0).1, 0.0);
    }

    #[test]
    fn recurrence_matches_reflection() {
        for i in 0..400 {
            let x = -60.0 + 0.1537 * i as f64;
            if x == x.floor() {
                continue;
            }
            let (l, s) = ln_rgamma_recurrence(x);
            let r = rgamma(x);
            let via_rec = s * l.exp();
            let direct = rgamma_recurrence(x);
            assert!((direct - r).abs() <= 1e-12 * r.abs().max(1e-300), "x={x}: {direct} vs {r}");
            assert!((via_rec - r).abs() <= 1e-12 * r.abs().max(1e-300), "x={x}: {via_rec} vs {r}");
        }
    }

    #[test]
    fn ln_gamma_large() {
        // ln Γ(100) = ln(99!)
        assert!((ln_gamma(100.0) - 359.134_205_369_575_4).abs() < 1e-12);
        assert!((ln_gamma(1000.5) - 5_908.674_175_848_677_488_7).abs() < 1e-9);
    }

    #[test]
    fn complex_matches_real() {
        for &x in &[0.3, 0.9, 1.7, 4.2, 11.0, -1.3] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0)).exp().re;
            assert!(rel(c, gamma(x)) < 1e-13, "x={x}");
        }
        // |Γ(iy)|² = π / (y sinh πy)
        let y: f64 = 3.0;
        let m = ln_gamma_complex(Complex64::new(0.0, y)).exp().norm_sqr();
        assert!(rel(m, PI / (y * (PI * y).sinh())) < 1e-13);
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for n in -10..10 {
            assert_eq!(sin_pi(n as f64), 0.0);
            assert_eq!(cos_pi(n as f64 + 0.5), 0.0);
        }
        assert!((sin_pi(0.25) - 0.5_f64.sqrt()).abs() < 2e-16);
    }
}

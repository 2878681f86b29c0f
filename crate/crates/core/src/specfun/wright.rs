use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::integrate;

use super::gamma::{ln_gamma, ln_rgamma_recurrence, rgamma_recurrence};
use super::sum::{log_term_error, SeriesDriver, SeriesTerm};
use super::{cos_pi, gamma, rgamma, sin_pi, SeriesValue};

fn check_args(nu: f64, x: f64, tol: f64) -> Result<()> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(domain(format!("wright_m: nu = {nu} outside (0, 1)")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(domain(format!("wright_m: x = {x} must be finite and >= 0")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("wright_m: tol = {tol} must be positive")));
    }
    Ok(())
}

// x^k Γ(ν(k+1)) / (k! π), which bounds |term_k| in both series forms.
fn envelope(nu: f64, k: usize, ln_x: f64) -> f64 {
    let lp = if k == 0 { 0.0 } else { k as f64 * ln_x - ln_gamma(k as f64 + 1.0) };
    (lp + ln_gamma(nu * (k + 1) as f64)).exp() / PI
}

// Exact rounding error of the product ν·m.
fn product_rounding(nu: f64, m: usize) -> f64 {
    let m = m as f64;
    let p = nu * m;
    nu.mul_add(m, -p)
}

// Rounding error of the computed 1 − ν·m: product error plus the TwoSum error.
fn argument_rounding(nu: f64, m: usize) -> f64 {
    let p = nu * m as f64;
    let z = 1.0 - p;
    let bb = z - 1.0;
    let sub_err = (1.0 - (z - bb)) + (-p - bb);
    sub_err - product_rounding(nu, m)
}

/// Wright-type M-function `M_ν(x) = Σ (−x)^k / (k! Γ(1 − ν(k+1)))`, summed in the
/// reciprocal-Gamma form.
///
/// `1/Γ` is taken by upward recurrence, so terms at the poles of Γ vanish exactly.
/// Returns [`Error::PrecisionLoss`] once cancellation between terms makes the
/// result unreliable at the requested absolute tolerance; [`wright_m_integral`]
/// remains accurate there.
pub fn wright_m(nu: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    check_args(nu, x, tol)?;
    if x == 0.0 {
        let v = rgamma(1.0 - nu);
        return Ok(SeriesValue {
            value: v,
            abs_error_estimate: 4.0 * f64::EPSILON * v.abs(),
            terms_used: 1,
            converged: true,
        });
    }
    let ln_x = x.ln();
    // x^k / k! by running product; the driver requests terms in order.
    let mut power = 1.0;
    SeriesDriver::new("wright_m", tol).run(|k| {
        if k > 0 {
            power *= x / k as f64;
        }
        let z = 1.0 - nu * (k + 1) as f64;
        let env = envelope(nu, k, ln_x);
        let r = rgamma_recurrence(z);
        if r == 0.0 {
            return Ok(SeriesTerm::new(0.0, env, 0.0));
        }
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        // Rounding of ν(k+1) shifts z by δ and 1/Γ by |δ ψ(z)|; ψ blows up near poles.
        let shift = argument_rounding(nu, k + 1).abs();
        let dist = (z - z.round()).abs().max(f64::EPSILON);
        let arg_err = shift * ((z.abs() + 2.0).ln() + 1.0 / dist);
        // Unit roundoff ε/2 per operation: k for x^k/k!, the rest for the recurrence and Γ.
        let rel_error = 0.5 * f64::EPSILON * (2.0 * k as f64 + z.abs() + 12.0) + arg_err;
        let value = alt * power * r;
        if value.is_finite() && power > 1e-280 {
            return Ok(SeriesTerm::new(value, env, rel_error));
        }
        // Past z ≈ −171, 1/Γ overflows while x^k/k! underflows; take the product in logs.
        let lp = k as f64 * ln_x - ln_gamma(k as f64 + 1.0);
        let (lr, sign) = ln_rgamma_recurrence(z);
        let value = alt * sign * (lp + lr).exp();
        Ok(SeriesTerm::new(value, env, rel_error + log_term_error(&[lp, lr])))
    })
}

/// The same M-function summed in the reflection form
/// `M_ν(x) = (1/π) Σ (−x)^k / k! · Γ(ν(k+1)) sin(πν(k+1))`.
///
/// Shares no Gamma evaluations at negative arguments with [`wright_m`], so the two
/// serve as mutual checks.
pub fn wright_m_reflection(nu: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    check_args(nu, x, tol)?;
    if x == 0.0 {
        let v = gamma(nu) * sin_pi(nu) / PI;
        return Ok(SeriesValue {
            value: v,
            abs_error_estimate: 8.0 * f64::EPSILON * v.abs(),
            terms_used: 1,
            converged: true,
        });
    }
    let ln_x = x.ln();
    let mut power = 1.0;
    SeriesDriver::new("wright_m_reflection", tol).run(|k| {
        if k > 0 {
            power *= x / k as f64;
        }
        let z = nu * (k + 1) as f64;
        let env = envelope(nu, k, ln_x);
        let s = sin_pi(z);
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (value, eval_err) = if z < 160.0 {
            (alt * power * gamma(z) * s / PI, 0.5 * f64::EPSILON * (2.0 * k as f64 + z + 12.0))
        } else {
            let logs = ln_x.abs() * k as f64 + 2.0 * ln_gamma(k as f64 + 1.0) + 12.0;
            (alt * env * s, f64::EPSILON * logs)
        };
        let shift = product_rounding(nu, k + 1).abs();
        let sin_err = if s == 0.0 { 0.0 } else { PI * shift / s.abs() };
        let rel_error = eval_err + shift * (z + 2.0).ln() + sin_err + f64::EPSILON;
        Ok(SeriesTerm::new(value, env, rel_error))
    })
}

/// The M-function from its Hankel-contour integral collapsed to the real line,
///
/// `M_ν(x) = 1/(πν) ∫_0^∞ exp(−w^{1/ν} − x w cos πν) sin(πν − x w sin πν) dw`.
///
/// For `ν ≤ 1/2` the integrand is damped for every `x`, so this stays accurate in
/// the large-`x` range where both series lose their digits. `terms_used` reports
/// integrand evaluations.
pub fn wright_m_integral(nu: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    check_args(nu, x, tol)?;
    let (s, c) = (sin_pi(nu), cos_pi(nu));
    let inv_nu = 1.0 / nu;
    let exponent = |w: f64| w.powf(inv_nu) + x * w * c;
    // Truncate where the envelope has dropped below e^{-60}.
    let mut upper: f64 = 1.0;
    while exponent(upper) < 60.0 {
        upper *= 1.25;
        if upper > 1e6 {
            return Err(domain("wright_m_integral: integrand does not decay"));
        }
    }
    let pieces = ((upper * x * s / PI).ceil() as usize + 8).min(4000);
    let width = upper / pieces as f64;
    let piece_tol = 0.25 * tol * PI * nu / pieces as f64;
    let integrand = |w: f64| -> Result<f64> { Ok((-exponent(w)).exp() * (PI * nu - x * w * s).sin()) };
    let (mut value, mut error, mut mass, mut evals) = (0.0, 0.0, 0.0, 0);
    for j in 0..pieces {
        let a = j as f64 * width;
        let r = integrate(integrand, a, a + width, piece_tol, 1e-15, 200)?;
        value += r.value;
        error += r.abs_error;
        mass += r.abs_mass;
        evals += r.evals;
    }
    let scale = 1.0 / (PI * nu);
    let tail = (-60.0_f64).exp() * upper;
    let abs_error = scale * (error + tail + 16.0 * f64::EPSILON * mass);
    if abs_error > tol {
        return Err(Error::Quadrature {
            what: format!("wright_m_integral at nu = {nu}, x = {x}"),
            estimate: abs_error,
            tol,
        });
    }
    Ok(SeriesValue { value: scale * value, abs_error_estimate: abs_error, terms_used: evals, converged: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x: f64) -> f64 {
        (-x * x / 4.0).exp() / PI.sqrt()
    }

    #[test]
    fn half_order_is_gaussian() {
        for i in 0..=60 {
            let x = 0.1 * i as f64;
            let a = wright_m(0.5, x, 1e-10).unwrap();
            // The Γ·sin form carries larger per-term rounding; its guard trips
            // near x = 6 at 1e-10 even though the sum is still good to ~1e-12.
            let b = wright_m_reflection(0.5, x, 1e-9).unwrap();
            let c = wright_m_integral(0.5, x, 1e-12).unwrap();
            for (v, tol) in [(a.value, 1e-10), (b.value, 1e-9), (c.value, 1e-12)] {
                assert!((v - gaussian(x)).abs() < tol, "x={x}: {v} vs {}", gaussian(x));
            }
            assert!(a.converged && a.abs_error_estimate <= 1e-10);
        }
    }

    #[test]
    fn value_at_origin() {
        // 1/Γ(0.75)
        let v = wright_m(0.25, 0.0, 1e-12).unwrap().value;
        assert!((v - 0.816_048_939_098_262_981).abs() < 1e-15);
        let r = wright_m_reflection(0.25, 0.0, 1e-12).unwrap().value;
        assert!((r - 0.816_048_939_098_262_981).abs() < 1e-14);
    }

    #[test]
    fn closed_gaussian_at_two() {
        let v = wright_m(0.5, 2.0, 1e-12).unwrap().value;
        assert!((v - 0.207_553_748_710_297_35).abs() < 1e-13);
    }

    #[test]
    fn integral_agrees_with_series_for_small_orders() {
        for &nu in &[0.125, 0.25, 0.375] {
            for &x in &[0.0, 0.3, 1.0, 2.5, 4.0] {
                let s = wright_m(nu, x, 1e-12).unwrap().value;
                let i = wright_m_integral(nu, x, 1e-12).unwrap().value;
                assert!((s - i).abs() < 1e-11, "nu={nu} x={x}: {s} vs {i}");
            }
        }
    }

    #[test]
    fn large_argument_is_flagged_not_wrong() {
        // M_{1/8}(20) ≈ 6e-10 while the terms reach 1e8.
        let err = wright_m(0.125, 20.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::PrecisionLoss { .. }));
        let v = wright_m_integral(0.125, 20.0, 1e-14).unwrap();
        assert!((v.value - 6.1e-10).abs() < 0.1e-10, "{}", v.value);
    }

    #[test]
    fn orders_near_one_sum_past_gamma_overflow() {
        // Convergence needs about 250 terms; 1/Γ(1 − ν(k+1)) overflows from k ≈ 196.
        let (nu, x) = (0.874_186_413_125_903_2, 1.866_287_357_815_857_4);
        let a = wright_m(nu, x, 1e-8).unwrap();
        let b = wright_m_reflection(nu, x, 1e-8).unwrap();
        assert!(a.converged && a.value.is_finite(), "{a:?}");
        assert!((a.value - b.value).abs() < 1e-8, "{} vs {}", a.value, b.value);
        assert!((a.value - 0.004_233_331_418_837_374).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(matches!(wright_m(1.0, 1.0, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(wright_m(0.0, 1.0, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(wright_m_reflection(0.5, -1.0, 1e-8), Err(Error::Domain(_))));
    }
}

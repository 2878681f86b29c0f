use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::{ray_integral, RayOptions};

use super::gamma::ln_gamma;
use super::sum::{log_term_error, SeriesDriver, SeriesTerm};
use super::{cos_pi, rgamma, sin_pi, SeriesValue};

const ASYMPTOTIC_TERMS: usize = 3;

fn check_args(beta: f64, y: f64, tol: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("mittag_leffler_neg: beta = {beta} outside (0, 1]")));
    }
    if !(y >= 0.0 && y.is_finite()) {
        return Err(domain(format!("mittag_leffler_neg: y = {y} must be finite and >= 0")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("mittag_leffler_neg: tol = {tol} must be positive")));
    }
    Ok(())
}

/// `E_β(−y)` for `0 < β ≤ 1`, `y ≥ 0`.
///
/// Regimes, tried in order:
/// 1. `β = 1`: `exp(−y)`.
/// 2. `y ≥ 10^{1/β}`: three terms of the algebraic expansion, accepted when the
///    error estimate from the first omitted nonzero term is below `tol`.
/// 3. `y < 10^{1/β}`: the power series, accepted unless cancellation is detected.
/// 4. Otherwise the spectral integral of [`mittag_leffler_spectral`], which covers
///    the gap between the two expansions.
pub fn mittag_leffler_neg(beta: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_args(beta, y, tol)?;
    if y == 0.0 {
        return Ok(SeriesValue { value: 1.0, abs_error_estimate: 0.0, terms_used: 1, converged: true });
    }
    if beta == 1.0 {
        let v = (-y).exp();
        return Ok(SeriesValue { value: v, abs_error_estimate: f64::EPSILON * v, terms_used: 1, converged: true });
    }
    if y >= 10f64.powf(1.0 / beta) {
        let a = mittag_leffler_asymptotic(beta, y, tol)?;
        if a.converged {
            return Ok(a);
        }
    } else {
        match mittag_leffler_series(beta, y, tol) {
            Ok(v) if v.converged => return Ok(v),
            Ok(_) | Err(Error::PrecisionLoss { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let v = mittag_leffler_spectral(beta, y, tol)?;
    if !v.converged {
        return Err(Error::PrecisionLoss {
            what: "mittag_leffler_neg",
            estimate: v.abs_error_estimate,
            tol,
            terms: v.terms_used,
        });
    }
    Ok(v)
}

/// Power series `Σ (−y)^k / Γ(βk+1)` under the crate's truncation and
/// cancellation rules.
pub fn mittag_leffler_series(beta: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_args(beta, y, tol)?;
    if y == 0.0 {
        return Ok(SeriesValue { value: 1.0, abs_error_estimate: 0.0, terms_used: 1, converged: true });
    }
    let ln_y = y.ln();
    SeriesDriver::new("mittag_leffler_series", tol).run(|k| {
        if k == 0 {
            return Ok(SeriesTerm::new(1.0, 1.0, 0.0));
        }
        let a = k as f64 * ln_y;
        let z = beta * k as f64 + 1.0;
        let b = ln_gamma(z);
        let mag = (a - b).exp();
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok(SeriesTerm::new(alt * mag, mag, log_term_error(&[a, b, z * z.ln()])))
    })
}

/// Algebraic expansion `E_β(−y) ≈ Σ_{j=1}^{3} (−1)^{j+1} y^{−j} / Γ(1−βj)`.
///
/// The error estimate is twice the first omitted nonzero term; `converged` reports
/// whether it is within `tol`.
pub fn mittag_leffler_asymptotic(beta: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_args(beta, y, tol)?;
    if y == 0.0 {
        return Err(domain("mittag_leffler_asymptotic: y must be positive"));
    }
    let term = |j: usize| {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sign * y.powi(-(j as i32)) * rgamma(1.0 - beta * j as f64)
    };
    let value: f64 = (1..=ASYMPTOTIC_TERMS).map(term).sum();
    let omitted = (ASYMPTOTIC_TERMS + 1..ASYMPTOTIC_TERMS + 8).map(term).find(|t| *t != 0.0).map_or(0.0, f64::abs);
    // The remainder of the expansion can exceed the first omitted term slightly.
    let abs_error_estimate = 2.0 * omitted + 4.0 * f64::EPSILON * value.abs();
    Ok(SeriesValue { value, abs_error_estimate, terms_used: ASYMPTOTIC_TERMS, converged: abs_error_estimate <= tol })
}

/// Spectral representation on the log-scale line `u = ln r`,
///
/// `E_β(−y) = ∫ exp(−τ e^u) · (sin πβ / π) / (w + 1/w + 2 cos πβ) du`,
/// with `w = e^{βu}` and `τ = y^{1/β}`.
///
/// The kernel is positive, so the integral is free of cancellation for every `y`.
/// `terms_used` reports integrand evaluations.
pub fn mittag_leffler_spectral(beta: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_args(beta, y, tol)?;
    if beta == 1.0 {
        return Err(domain("mittag_leffler_spectral: beta = 1 has no continuous spectrum"));
    }
    let tau = y.powf(1.0 / beta);
    let (s, c) = (sin_pi(beta) / PI, 2.0 * cos_pi(beta));
    let r = ray_integral(
        |u: f64| {
            let w = (beta * u).exp();
            let kernel = s / (w + 1.0 / w + c);
            let damp = (-tau * u.exp()).exp();
            Ok(if damp == 0.0 || !kernel.is_finite() { 0.0 } else { damp * kernel })
        },
        tol * 0.5,
        RayOptions::default(),
    )?;
    Ok(SeriesValue {
        value: r.value,
        abs_error_estimate: r.abs_error,
        terms_used: r.evals.max(1),
        converged: r.abs_error <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(mittag_leffler_neg(0.3, 0.0, 1e-10).unwrap().value, 1.0);
        let v = mittag_leffler_neg(1.0, 1.0, 1e-12).unwrap().value;
        assert!((v - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn half_order_is_scaled_erfc() {
        // E_{1/2}(−1) = e·erfc(1)
        let want = 0.427_583_576_155_807_004;
        for v in [
            mittag_leffler_neg(0.5, 1.0, 1e-12).unwrap().value,
            mittag_leffler_series(0.5, 1.0, 1e-12).unwrap().value,
            mittag_leffler_spectral(0.5, 1.0, 1e-12).unwrap().value,
        ] {
            assert!((v - want).abs() < 1e-11, "{v}");
        }
    }

    #[test]
    fn spectral_matches_series_where_both_work() {
        for &beta in &[0.2, 0.45, 0.8, 0.95] {
            for &y in &[0.05, 0.5, 1.0] {
                let a = mittag_leffler_series(beta, y, 1e-10).unwrap().value;
                let b = mittag_leffler_spectral(beta, y, 1e-12).unwrap().value;
                assert!((a - b).abs() < 1e-10, "beta={beta} y={y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn asymptotic_matches_spectral_far_out() {
        for &beta in &[0.25, 0.5, 0.75] {
            let y = 10f64.powf(1.0 / beta) * 3.0;
            let a = mittag_leffler_asymptotic(beta, y, 1e-9).unwrap();
            let b = mittag_leffler_spectral(beta, y, 1e-13).unwrap().value;
            assert!((a.value - b).abs() <= a.abs_error_estimate.max(1e-13), "beta={beta}");
        }
    }

    #[test]
    fn covers_the_crossover_gap() {
        // Series cancels and the expansion is too coarse between y ≈ 3 and 10^{1/β}.
        for &y in &[5.0, 40.0, 900.0, 9_000.0, 20_000.0] {
            let v = mittag_leffler_neg(0.25, y, 1e-10).unwrap();
            assert!(v.converged && v.value > 0.0 && v.value < 1.0, "y={y}: {v:?}");
        }
    }
}

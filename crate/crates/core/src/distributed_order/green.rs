use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{ray_integral, RayOptions};
use crate::single_order::{GreenEvaluation, GreenMethod};
use crate::specfun::{cos_pi, rgamma, sin_pi, SeriesDriver, SeriesTerm, SeriesValue};

use super::branch::RayValue;
use super::density::OrderDensity;

/// Term cap for the `x`-series of the solution.
pub const GREEN_SERIES_MAX_TERMS: usize = 300;

/// Absolute tolerance for the cached `φ_k`; their quadrature errors enter the
/// series error estimate, so the cache never limits a caller's tolerance silently.
const PHI_TOL: f64 = 1e-13;

/// One time-scale function `φ_k(t)` with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: f64,
    pub abs_error: f64,
    /// `φ_k` with the sine replaced by its bound `min(1, πγ(k+1)/2)`; bounds
    /// `|φ_k|` and does not vanish where the sine factor does.
    pub envelope: f64,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t = {t}: the solution is defined for t > 0 only")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    Ok(())
}

fn phi_quadrature(density: &OrderDensity, k: usize, t: f64, tol: f64, with_envelope: bool) -> Result<PhiValue> {
    let half = 0.5 * (k + 1) as f64;
    let integrand = |signed: bool| {
        move |u: f64| -> Result<f64> {
            let damp = -t * u.exp();
            if damp < -745.0 {
                return Ok(0.0);
            }
            let v = RayValue::at(density, u)?;
            let s = if signed { sin_pi(v.gamma() * half) } else { (PI * v.gamma() * half).min(1.0) };
            Ok(if s == 0.0 { 0.0 } else { s * (damp + half * v.log_rho()).exp() })
        }
    };
    let r = ray_integral(integrand(true), tol, RayOptions::default())?;
    let envelope =
        if with_envelope { ray_integral(integrand(false), tol, RayOptions::default())?.value } else { r.abs_mass };
    Ok(PhiValue { value: r.value, abs_error: r.abs_error, envelope: envelope.max(r.value.abs()) })
}

/// `φ_k(t) = ∫₀^∞ (e^{−rt}/r) sin[πγ(k+1)/2] ρ^{(k+1)/2} dr`, integrated in `u = ln r`.
pub fn phi_k(density: &OrderDensity, k: usize, t: f64, tol: f64) -> Result<f64> {
    check_t(t)?;
    check_tol(tol)?;
    let p = phi_quadrature(density, k, t, tol, false)?;
    if p.abs_error > tol {
        return Err(Error::Quadrature { what: format!("phi_{k}({t})"), estimate: p.abs_error, tol });
    }
    Ok(p.value)
}

/// `F(y) = y Σ (−y)^k/k! · π / (Γ(γ(k+1)/2) Γ(1 − γ(k+1)/2))`, the kernel of the
/// branch-cut representation, summed in its reciprocal-Gamma form.
pub fn f_series(gamma: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain(format!("f_series: gamma = {gamma} outside (0, 1]")));
    }
    if !(y >= 0.0 && y.is_finite()) {
        return Err(domain(format!("f_series: y = {y} must be finite and >= 0")));
    }
    check_tol(tol)?;
    if y == 0.0 {
        return Ok(SeriesValue { value: 0.0, abs_error_estimate: 0.0, terms_used: 1, converged: true });
    }
    let mut power = y;
    SeriesDriver::new("f_series", tol).run(|k| {
        if k > 0 {
            power *= y / k as f64;
        }
        let a = 0.5 * gamma * (k + 1) as f64;
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        let value = alt * power * PI * rgamma(a) * rgamma(1.0 - a);
        Ok(SeriesTerm::new(value, power, f64::EPSILON * (k as f64 + a + 8.0)))
    })
}

/// Closed form of [`f_series`]: `y e^{−y cos(πγ/2)} sin(πγ/2 − y sin(πγ/2))`.
pub fn f_closed(gamma: f64, y: f64) -> f64 {
    let (c, s) = (cos_pi(0.5 * gamma), sin_pi(0.5 * gamma));
    y * (-y * c).exp() * (0.5 * PI * gamma - y * s).sin()
}

/// Evaluator for one order density with a cache of the `x`-independent `φ_k(t)`.
///
/// The cache is behind an `RwLock`, so a solver can be shared across threads
/// evaluating different grid points.
#[derive(Debug)]
pub struct DistributedOrderSolver {
    density: OrderDensity,
    phi_cache: RwLock<HashMap<(u64, usize), PhiValue>>,
}

impl DistributedOrderSolver {
    pub fn new(density: OrderDensity) -> Self {
        Self { density, phi_cache: RwLock::new(HashMap::new()) }
    }

    pub fn density(&self) -> &OrderDensity {
        &self.density
    }

    pub fn cached_phi_count(&self) -> usize {
        self.phi_cache.read().map_or(0, |c| c.len())
    }

    /// `φ_k(t)` at the solver's internal tolerance, cached per `(t, k)`.
    pub fn phi(&self, k: usize, t: f64) -> Result<PhiValue> {
        check_t(t)?;
        let key = (t.to_bits(), k);
        if let Some(v) = self.phi_cache.read().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(v);
        }
        let v = phi_quadrature(&self.density, k, t, PHI_TOL, true)?;
        if let Ok(mut c) = self.phi_cache.write() {
            c.insert(key, v);
        }
        Ok(v)
    }

    /// `u(x, t) = (1/2π) Σ (−|x|)^k/k! · φ_k(t)`.
    ///
    /// Returns [`Error::PrecisionLoss`] where cancellation between terms dominates.
    pub fn green_series(&self, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
        check_t(t)?;
        check_tol(tol)?;
        if !x.is_finite() {
            return Err(domain(format!("x = {x} must be finite")));
        }
        let ax = x.abs();
        let scale = 1.0 / (2.0 * PI);
        let sum = if ax == 0.0 {
            let p = self.phi(0, t)?;
            SeriesValue { value: p.value, abs_error_estimate: p.abs_error, terms_used: 1, converged: true }
        } else {
            let mut power = 1.0;
            SeriesDriver::new("green_series", tol / scale).with_max_terms(GREEN_SERIES_MAX_TERMS).run(|k| {
                if k > 0 {
                    power *= ax / k as f64;
                }
                let p = self.phi(k, t)?;
                let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
                Ok(SeriesTerm {
                    value: alt * power * p.value,
                    envelope: power * p.envelope,
                    rel_error: f64::EPSILON * (k as f64 + 2.0),
                    abs_error: power * p.abs_error,
                })
            })?
        };
        if !sum.converged {
            return Err(Error::PrecisionLoss {
                what: "green_series: term cap reached",
                estimate: scale * sum.abs_error_estimate,
                tol,
                terms: sum.terms_used,
            });
        }
        Ok(GreenEvaluation {
            x,
            t,
            value: scale * sum.value,
            method: GreenMethod::Series,
            abs_error_estimate: scale * sum.abs_error_estimate,
        })
    }

    /// `u(x, t) = (1/2π|x|) ∫₀^∞ (e^{−rt}/r) F(ρ^{1/2}|x|) dr` with `F` in closed form.
    ///
    /// The integrand is damped for every `x`, so this covers the range where
    /// [`Self::green_series`] cancels.
    pub fn green_integral(&self, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
        check_t(t)?;
        check_tol(tol)?;
        if !x.is_finite() {
            return Err(domain(format!("x = {x} must be finite")));
        }
        let ax = x.abs();
        let scale = 1.0 / (2.0 * PI);
        let r = ray_integral(
            |u: f64| {
                let damp = -t * u.exp();
                if damp < -745.0 {
                    return Ok(0.0);
                }
                let v = RayValue::at(&self.density, u)?;
                let half_gamma = 0.5 * v.gamma();
                let sqrt_rho = (0.5 * v.log_rho()).exp();
                let y = ax * sqrt_rho;
                let expo = damp + 0.5 * v.log_rho() - y * cos_pi(half_gamma);
                Ok((expo).exp() * (PI * half_gamma - y * sin_pi(half_gamma)).sin())
            },
            0.5 * tol / scale,
            RayOptions::default(),
        )?;
        let abs_error = scale * (r.abs_error + 16.0 * f64::EPSILON * r.abs_mass);
        if abs_error > tol {
            return Err(Error::Quadrature {
                what: format!("green_integral at x = {x}, t = {t}"),
                estimate: abs_error,
                tol,
            });
        }
        Ok(GreenEvaluation {
            x,
            t,
            value: scale * r.value,
            method: GreenMethod::LaplaceIntegral,
            abs_error_estimate: abs_error,
        })
    }

    /// [`Self::green_series`], switching to [`Self::green_integral`] on precision loss.
    pub fn green_with_fallback(&self, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
        match self.green_series(x, t, tol) {
            Err(Error::PrecisionLoss { .. }) => self.green_integral(x, t, tol),
            other => other,
        }
    }

    /// Spatial characteristic function `û(κ, t) = ∫₀^∞ (e^{−rt}/r) K(κ, r) dr`.
    pub fn fourier_hat(&self, kappa: f64, t: f64, tol: f64) -> Result<f64> {
        check_t(t)?;
        check_tol(tol)?;
        if !kappa.is_finite() {
            return Err(domain(format!("kappa = {kappa} must be finite")));
        }
        if kappa == 0.0 {
            return Ok(1.0);
        }
        if self.density.is_classical() {
            // No branch cut: the kernel is a point mass at r = κ².
            return Ok((-kappa * kappa * t).exp());
        }
        let r = ray_integral(
            |u: f64| {
                let damp = (-t * u.exp()).exp();
                if damp == 0.0 {
                    return Ok(0.0);
                }
                Ok(damp * RayValue::at(&self.density, u)?.kernel(kappa))
            },
            0.5 * tol,
            RayOptions::default(),
        )?;
        if r.abs_error > tol {
            return Err(Error::Quadrature {
                what: format!("fourier_hat at kappa = {kappa}, t = {t}"),
                estimate: r.abs_error,
                tol,
            });
        }
        Ok(r.value)
    }
}

/// One-shot [`DistributedOrderSolver::green_series`] without a shared cache.
pub fn green_series(density: &OrderDensity, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
    DistributedOrderSolver::new(density.clone()).green_series(x, t, tol)
}

/// One-shot [`DistributedOrderSolver::fourier_hat`].
pub fn fourier_hat(density: &OrderDensity, kappa: f64, t: f64, tol: f64) -> Result<f64> {
    DistributedOrderSolver::new(density.clone()).fourier_hat(kappa, t, tol)
}

/// Worst mismatch between two time slices rescaled with a single exponent `c`:
/// `max_X |t₁^c u(X t₁^c, t₁) − t₂^c u(X t₂^c, t₂)|`.
pub fn collapse_discrepancy(
    solver: &DistributedOrderSolver,
    c: f64,
    (t1, t2): (f64, f64),
    xs: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &big_x in xs {
        let a = t1.powf(c) * solver.green_with_fallback(big_x * t1.powf(c), t1, tol)?.value;
        let b = t2.powf(c) * solver.green_with_fallback(big_x * t2.powf(c), t2, tol)?.value;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// [`collapse_discrepancy`] over a grid of exponents; returns `(c, discrepancy)` pairs.
pub fn collapse_scan(
    solver: &DistributedOrderSolver,
    exponents: &[f64],
    times: (f64, f64),
    xs: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    exponents.iter().map(|&c| Ok((c, collapse_discrepancy(solver, c, times, xs, tol)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_order;
    use crate::specfun::{gamma, mittag_leffler_neg};

    fn phi_closed(nu: f64, k: usize, t: f64) -> f64 {
        let a = 0.5 * nu * (k + 1) as f64;
        sin_pi(a) * gamma(a) / t.powf(a)
    }

    #[test]
    fn phi_zero_for_half_order() {
        let d = OrderDensity::single(0.5).unwrap();
        let v = phi_k(&d, 0, 1.0, 1e-12).unwrap();
        // sin(π/4) Γ(1/4)
        assert!((v - 2.563_693_352_040_847_6).abs() < 1e-11, "{v}");
    }

    #[test]
    fn phi_matches_closed_form() {
        for &nu in &[0.25, 0.5, 0.75] {
            let d = OrderDensity::single(nu).unwrap();
            for k in 0..=8 {
                for &t in &[0.5, 1.0, 2.0] {
                    let v = phi_k(&d, k, t, 1e-10).unwrap();
                    let w = phi_closed(nu, k, t);
                    assert!((v - w).abs() < 1e-10, "nu={nu} k={k} t={t}: {v} vs {w}");
                }
            }
        }
    }

    #[test]
    fn classical_odd_phi_vanish() {
        let d = OrderDensity::single(1.0).unwrap();
        assert_eq!(phi_k(&d, 1, 1.0, 1e-10).unwrap(), 0.0);
        let v = phi_k(&d, 0, 1.0, 1e-12).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn f_series_matches_closed_form() {
        for &g in &[0.1, 0.5, 0.9, 1.0] {
            for &y in &[0.0, 0.3, 1.0, 4.0] {
                let s = f_series(g, y, 1e-12).unwrap().value;
                assert!((s - f_closed(g, y)).abs() < 1e-12, "g={g} y={y}");
            }
        }
    }

    #[test]
    fn reduces_to_single_order() {
        for &nu in &[0.25, 0.5, 0.75] {
            let solver = DistributedOrderSolver::new(OrderDensity::single(nu).unwrap());
            for &t in &[0.5, 1.0, 2.0] {
                for &x in &[0.0, 0.5, 1.5, 3.0] {
                    let a = solver.green_series(x, t, 1e-9).unwrap().value;
                    let b = single_order::green(nu, x, t, 1e-12).unwrap().value;
                    assert!((a - b).abs() < 1e-9, "nu={nu} t={t} x={x}: {a} vs {b}");
                    let c = solver.green_integral(x, t, 1e-9).unwrap().value;
                    assert!((c - b).abs() < 1e-9, "integral nu={nu} t={t} x={x}: {c} vs {b}");
                }
            }
        }
    }

    #[test]
    fn series_and_integral_agree_for_mixtures() {
        for d in [OrderDensity::two_atom_preset(), OrderDensity::uniform()] {
            let solver = DistributedOrderSolver::new(d);
            for &t in &[0.5, 2.0] {
                for &x in &[0.0, 0.7, 2.0] {
                    let a = solver.green_series(x, t, 1e-10).unwrap().value;
                    let b = solver.green_integral(x, t, 1e-10).unwrap().value;
                    assert!((a - b).abs() < 1e-10, "t={t} x={x}: {a} vs {b}");
                }
            }
            assert!(solver.cached_phi_count() > 0);
        }
    }

    #[test]
    fn symmetric_in_x() {
        let solver = DistributedOrderSolver::new(OrderDensity::two_atom_preset());
        let a = solver.green_series(1.3, 1.0, 1e-9).unwrap().value;
        let b = solver.green_series(-1.3, 1.0, 1e-9).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn fourier_hat_values() {
        let d = OrderDensity::single(0.5).unwrap();
        let v = fourier_hat(&d, 1.0, 1.0, 1e-10).unwrap();
        let e = mittag_leffler_neg(0.5, 1.0, 1e-12).unwrap().value;
        assert!((v - e).abs() < 1e-9, "{v} vs {e}");
        let c = OrderDensity::single(1.0).unwrap();
        assert!((fourier_hat(&c, 1.0, 1.0, 1e-10).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        for d in [OrderDensity::two_atom_preset(), OrderDensity::uniform()] {
            assert_eq!(fourier_hat(&d, 0.0, 1.0, 1e-10).unwrap(), 1.0);
            let near = fourier_hat(&d, 1e-3, 1.0, 1e-10).unwrap();
            assert!((near - 1.0).abs() < 1e-4, "{near}");
        }
    }

    #[test]
    fn collapse_works_only_for_a_single_order() {
        let xs = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0];
        let single = DistributedOrderSolver::new(OrderDensity::single(0.5).unwrap());
        let d = collapse_discrepancy(&single, 0.25, (0.5, 2.0), &xs, 1e-11).unwrap();
        assert!(d < 1e-9, "{d}");
        let mixed = DistributedOrderSolver::new(OrderDensity::two_atom_preset());
        let d = collapse_discrepancy(&mixed, 0.25, (0.5, 2.0), &xs, 1e-9).unwrap();
        assert!(d > 1e-3, "{d}");
    }
}

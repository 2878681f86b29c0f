use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

use super::density::OrderDensity;

/// `B(r e^{iπ}) = ρ e^{iπγ}` at one point of the negative real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCutPoint {
    pub r: f64,
    pub rho: f64,
    pub gamma: f64,
    /// `ln ρ`, finite even where `rho` under- or overflows.
    pub log_rho: f64,
}

/// `B` on the ray in scaled form: `B(e^{u+iπ}) = e^m · b`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RayValue {
    pub u: f64,
    pub m: f64,
    pub b: Complex64,
}

impl RayValue {
    pub fn at(density: &OrderDensity, u: f64) -> Result<Self> {
        let (m, b) = density.scaled_b_of_log(Complex64::new(u, PI))?;
        let v = Self { u, m, b };
        v.check()?;
        Ok(v)
    }

    fn check(&self) -> Result<()> {
        let admissible = self.b.im > 0.0 || (self.b.im == 0.0 && self.b.re < 0.0);
        if !admissible || !self.b.is_finite() || !self.m.is_finite() {
            let scale = self.m.exp();
            return Err(Error::DegenerateDensity { r: self.u.exp(), re: self.b.re * scale, im: self.b.im * scale });
        }
        Ok(())
    }

    pub fn log_rho(&self) -> f64 {
        self.m + self.b.norm().ln()
    }

    pub fn gamma(&self) -> f64 {
        self.b.im.atan2(self.b.re) / PI
    }

    /// `Im B / |B|² = sin(πγ)/ρ`.
    pub fn im_reciprocal(&self) -> f64 {
        let n = self.b.norm_sqr();
        self.b.im / n * (-self.m).exp()
    }

    /// `(1/π) κ² ρ sin πγ / |κ² + B|²`.
    pub fn kernel(&self, kappa: f64) -> f64 {
        let k2 = kappa * kappa;
        if k2 == 0.0 {
            return 0.0;
        }
        // Divide through by e^m to keep the magnitudes representable.
        let k2s = k2 * (-self.m).exp();
        if !k2s.is_finite() {
            return 0.0;
        }
        let d = Complex64::new(k2s + self.b.re, self.b.im).norm_sqr();
        let v = k2s * self.b.im / d / PI;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("branch cut: r = {r} must be positive")));
    }
    Ok(())
}

/// Modulus and normalized argument of `B(r e^{iπ})`.
///
/// Returns [`Error::DegenerateDensity`] if the argument falls outside `(0, π]`.
pub fn branch_cut(density: &OrderDensity, r: f64) -> Result<BranchCutPoint> {
    check_r(r)?;
    let v = RayValue::at(density, r.ln())?;
    let log_rho = v.log_rho();
    Ok(BranchCutPoint { r, rho: log_rho.exp(), gamma: v.gamma(), log_rho })
}

/// Spectral kernel `K(κ, r) = (1/π) κ²ρ sin πγ / (κ⁴ + 2κ²ρ cos πγ + ρ²)`.
pub fn kernel_k(density: &OrderDensity, kappa: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    if !kappa.is_finite() {
        return Err(domain(format!("kernel_k: kappa = {kappa} must be finite")));
    }
    Ok(RayValue::at(density, r.ln())?.kernel(kappa))
}

//! Fundamental solution of the single-order time-fractional diffusion equation,
//! `u(x, t) = t^{−β/2} U(|x| / t^{β/2})` with `U = ½ M_{β/2}`, and its second moment.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::integrate;
use crate::specfun::{gamma, wright_m, wright_m_integral, SeriesValue};

/// How a Green-function value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenMethod {
    Series,
    /// Hankel-contour integral of the M-function, used where the series cancels.
    HankelIntegral,
    /// Laplace-type integral over the branch cut, the distributed-order analogue.
    LaplaceIntegral,
    FourierOracle,
    MellinBarnesOracle,
    DoubleInversionOracle,
}

impl GreenMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::HankelIntegral => "hankel_integral",
            Self::LaplaceIntegral => "laplace_integral",
            Self::FourierOracle => "fourier_oracle",
            Self::MellinBarnesOracle => "mellin_barnes_oracle",
            Self::DoubleInversionOracle => "double_inversion_oracle",
        }
    }
}

impl fmt::Display for GreenMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sample `u(x, t)` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenEvaluation {
    pub x: f64,
    pub t: f64,
    pub value: f64,
    pub method: GreenMethod,
    pub abs_error_estimate: f64,
}

/// The order `β ∈ (0, 1]` of a single-order problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleOrderProblem {
    beta: f64,
}

impl SingleOrderProblem {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn green(&self, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
        green(self.beta, x, t, tol)
    }

    pub fn second_moment(&self, t: f64) -> Result<f64> {
        second_moment(self.beta, t)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("beta = {beta} outside (0, 1]")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t = {t}: the solution is defined for t > 0 only")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(domain(format!("x = {x} must be finite")));
    }
    Ok(())
}

/// `U(x) = ½ M_{β/2}(|x|)`, the profile at `t = 1`, from the reciprocal-Gamma series.
pub fn reduced_green(beta: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    check_beta(beta)?;
    check_x(x)?;
    Ok(wright_m(beta / 2.0, x.abs(), 2.0 * tol)?.scaled(0.5))
}

/// `U(x)` from the Hankel-contour integral of the M-function.
pub fn reduced_green_integral(beta: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    check_beta(beta)?;
    check_x(x)?;
    Ok(wright_m_integral(beta / 2.0, x.abs(), 2.0 * tol)?.scaled(0.5))
}

fn scaled_evaluation(beta: f64, x: f64, t: f64, tol: f64, integral: bool) -> Result<GreenEvaluation> {
    check_beta(beta)?;
    check_x(x)?;
    check_t(t)?;
    let scale = t.powf(-beta / 2.0);
    let big_x = x.abs() * scale;
    let (u, method) = if integral {
        (reduced_green_integral(beta, big_x, tol / scale)?, GreenMethod::HankelIntegral)
    } else {
        (reduced_green(beta, big_x, tol / scale)?, GreenMethod::Series)
    };
    Ok(GreenEvaluation { x, t, value: scale * u.value, method, abs_error_estimate: scale * u.abs_error_estimate })
}

/// `u(x, t) = t^{−β/2} U(|x| t^{−β/2})` by the series; `tol` is absolute in `u`.
pub fn green(beta: f64, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
    scaled_evaluation(beta, x, t, tol, false)
}

/// As [`green`], but switches to the Hankel integral when the series reports
/// [`Error::PrecisionLoss`].
pub fn green_with_fallback(beta: f64, x: f64, t: f64, tol: f64) -> Result<GreenEvaluation> {
    match scaled_evaluation(beta, x, t, tol, false) {
        Err(Error::PrecisionLoss { .. }) => scaled_evaluation(beta, x, t, tol, true),
        other => other,
    }
}

/// `μ₂(t) = 2 t^β / Γ(β + 1)`.
pub fn second_moment(beta: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    check_t(t)?;
    Ok(2.0 * t.powf(beta) / gamma(beta + 1.0))
}

/// Zeroth and second spatial moments of a symmetric profile, by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialMoments {
    /// `∫ u dx` over the real line.
    pub mass: f64,
    /// `∫ x² u dx` over the real line.
    pub second: f64,
    /// Half-width of the integrated range.
    pub x_max: f64,
    /// Quadrature error plus geometric bound on the neglected tails (of `second`).
    pub abs_error_estimate: f64,
    /// Smallest sampled value of `u`.
    pub min_value: f64,
}

/// Integrates a symmetric profile `u(|x|)` over the real line.
///
/// Panels of width `panel` are added until the last one contributes less than
/// `1e-10` to the mass (and that much relative to the second moment) while the
/// mass contributions decay geometrically; the tails beyond are bounded by the
/// geometric series of the last mass ratio. Decay is judged on the mass alone
/// because an evaluator's absolute error floor, weighted by `x²`, never decays.
pub fn spatial_moments<F>(mut u: F, panel: f64, tol: f64) -> Result<SpatialMoments>
where
    F: FnMut(f64) -> Result<f64>,
{
    const LAST_PANEL: f64 = 1e-10;
    const MAX_PANELS: usize = 4000;
    let mut min_value = f64::INFINITY;
    let (mut mass, mut second, mut error) = (0.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    for j in 0..MAX_PANELS {
        let a = j as f64 * panel;
        let b = a + panel;
        let mut sample = |x: f64| -> Result<f64> {
            let v = u(x)?;
            min_value = min_value.min(v);
            Ok(v)
        };
        let m0 = integrate(&mut sample, a, b, tol * 0.01, 1e-13, 100)?;
        let m2 = integrate(|x: f64| Ok(x * x * u(x)?), a, b, tol * 0.01, 1e-13, 100)?;
        mass += 2.0 * m0.value;
        second += 2.0 * m2.value;
        error += 2.0 * (m0.abs_error + m2.abs_error);
        let contrib = m0.abs_mass;
        if j > 0 && contrib < LAST_PANEL && m2.abs_mass < LAST_PANEL * second.abs().max(1.0) {
            let q = contrib / prev;
            if q < 1.0 {
                let ratio = q / (1.0 - q);
                let tail = 2.0 * (contrib + m2.abs_mass) * ratio;
                return Ok(SpatialMoments { mass, second, x_max: b, abs_error_estimate: error + tail, min_value });
            }
        }
        prev = contrib;
    }
    Err(Error::Quadrature {
        what: "spatial moments: profile did not decay within the panel budget".into(),
        estimate: prev,
        tol,
    })
}

/// Mass and variance of `u(·, t)` by quadrature of the solution itself, using
/// [`green_with_fallback`] so that the far tails stay accurate.
pub fn numerical_moments(beta: f64, t: f64, tol: f64) -> Result<SpatialMoments> {
    check_beta(beta)?;
    check_t(t)?;
    let panel = 0.5 * t.powf(beta / 2.0);
    spatial_moments(|x| Ok(green_with_fallback(beta, x, t, tol)?.value), panel, tol)
}

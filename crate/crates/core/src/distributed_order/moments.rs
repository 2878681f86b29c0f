use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{ray_integral, RayOptions};
use crate::specfun::gamma;

use super::branch::RayValue;
use super::density::{ContinuousPart, OrderDensity};

/// How a moment curve was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedFormSingle,
    LaplaceInversion,
}

impl MomentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClosedFormSingle => "closed_form_single",
            Self::LaplaceInversion => "laplace_inversion",
        }
    }
}

/// Leading behaviour of `μ₂(t)` at one end of the time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AsymptoticLaw {
    /// `μ₂ ~ prefactor · t^exponent`.
    Power { exponent: f64, prefactor: f64 },
    /// `μ₂ ~ prefactor · ln t` as `t → ∞`.
    Log { prefactor: f64 },
    /// `μ₂ ~ prefactor · t ln(1/t)` as `t → 0`.
    TLogInverse { prefactor: f64 },
}

impl AsymptoticLaw {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Power { exponent, prefactor } => prefactor * t.powf(exponent),
            Self::Log { prefactor } => prefactor * t.ln(),
            Self::TLogInverse { prefactor } => -prefactor * t * t.ln(),
        }
    }

    pub fn prefactor(&self) -> f64 {
        match *self {
            Self::Power { prefactor, .. } | Self::Log { prefactor } | Self::TLogInverse { prefactor } => prefactor,
        }
    }
}

/// Least-squares fit of one asymptotic law over a window of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteFit {
    pub law: AsymptoticLaw,
    /// Root-mean-square residual of the linearized fit.
    pub residual: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

/// `μ₂(t)` on a grid with the predicted asymptotic laws of the density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCurve {
    pub t_grid: Vec<f64>,
    pub mu2: Vec<f64>,
    pub abs_error: Vec<f64>,
    pub method: MomentMethod,
    pub asymptote_small_t: Option<AsymptoticLaw>,
    pub asymptote_large_t: Option<AsymptoticLaw>,
}

impl MomentCurve {
    /// Fit over the first decade of the grid, with the shape of the predicted
    /// small-`t` law (a power law when none is known).
    pub fn fit_small_t(&self) -> Option<AsymptoteFit> {
        let t0 = *self.t_grid.first()?;
        self.fit_window(t0, 10.0 * t0 * (1.0 + 1e-12), self.asymptote_small_t)
    }

    /// Fit over the last decade of the grid.
    pub fn fit_large_t(&self) -> Option<AsymptoteFit> {
        let t1 = *self.t_grid.last()?;
        self.fit_window(0.1 * t1 * (1.0 - 1e-12), t1, self.asymptote_large_t)
    }

    fn fit_window(&self, lo: f64, hi: f64, shape: Option<AsymptoticLaw>) -> Option<AsymptoteFit> {
        let (t, m): (Vec<f64>, Vec<f64>) =
            self.t_grid.iter().zip(&self.mu2).filter(|(t, _)| **t >= lo && **t <= hi).map(|(t, m)| (*t, *m)).unzip();
        let shape = shape.unwrap_or(AsymptoticLaw::Power { exponent: 1.0, prefactor: 1.0 });
        fit_law(shape, &t, &m)
    }
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits a law of the same kind as `shape` to `(t, μ)`:
/// `ln μ` against `ln t` for power laws, `μ` against `ln t` for the log law,
/// `μ/t` against `ln(1/t)` for the `t ln(1/t)` law. Needs at least two points.
pub fn fit_law(shape: AsymptoticLaw, t: &[f64], mu: &[f64]) -> Option<AsymptoteFit> {
    if t.len() < 2 || t.len() != mu.len() {
        return None;
    }
    let lt: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let (law, residual) = match shape {
        AsymptoticLaw::Power { .. } => {
            let lm: Vec<f64> = mu.iter().map(|v| v.ln()).collect();
            let (p, c, res) = least_squares(&lt, &lm);
            (AsymptoticLaw::Power { exponent: p, prefactor: c.exp() }, res)
        }
        AsymptoticLaw::Log { .. } => {
            let (a, _, res) = least_squares(&lt, mu);
            (AsymptoticLaw::Log { prefactor: a }, res)
        }
        AsymptoticLaw::TLogInverse { .. } => {
            let inv: Vec<f64> = lt.iter().map(|v| -v).collect();
            let ratio: Vec<f64> = t.iter().zip(mu).map(|(t, m)| m / t).collect();
            let (a, _, res) = least_squares(&inv, &ratio);
            (AsymptoticLaw::TLogInverse { prefactor: a }, res)
        }
    };
    Some(AsymptoteFit { law, residual, t_min: t[0], t_max: t[t.len() - 1], points: t.len() })
}

/// `n` points from `a` to `b` equally spaced in `ln t`, endpoints exact.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| match i {
                    0 => a,
                    i if i == n - 1 => b,
                    i => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(domain("moment curve: empty time grid"));
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(domain("moment curve: times must be positive"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("moment curve: times must be increasing"));
    }
    Ok(())
}

/// Predicted laws at small and large `t` from the density's extreme orders.
fn predicted_laws(density: &OrderDensity) -> (Option<AsymptoticLaw>, Option<AsymptoticLaw>) {
    let power = |beta: f64, w: f64| AsymptoticLaw::Power { exponent: beta, prefactor: 2.0 / (w * gamma(beta + 1.0)) };
    match (density.atoms(), density.continuous()) {
        (atoms, None) => {
            let lo = atoms.first().map(|a| power(a.beta, a.weight));
            let hi = atoms.last().map(|a| power(a.beta, a.weight));
            (hi, lo)
        }
        ([], Some(ContinuousPart::Uniform { level })) => (
            Some(AsymptoticLaw::TLogInverse { prefactor: 2.0 / level }),
            Some(AsymptoticLaw::Log { prefactor: 2.0 / level }),
        ),
        _ => (None, None),
    }
}

/// `μ₂(t) = 2t^ν / Γ(ν + 1)` for `δ(β − ν)`.
pub fn moment_curve_single(nu: f64, t_grid: &[f64]) -> Result<MomentCurve> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(domain(format!("moment curve: nu = {nu} outside (0, 1]")));
    }
    check_grid(t_grid)?;
    let law = AsymptoticLaw::Power { exponent: nu, prefactor: 2.0 / gamma(nu + 1.0) };
    let mu2: Vec<f64> = t_grid.iter().map(|&t| law.eval(t)).collect();
    Ok(MomentCurve {
        t_grid: t_grid.to_vec(),
        abs_error: mu2.iter().map(|m| 4.0 * f64::EPSILON * m).collect(),
        mu2,
        method: MomentMethod::ClosedFormSingle,
        asymptote_small_t: Some(law),
        asymptote_large_t: Some(law),
    })
}

/// `μ₂(t)` by inverting `2/(s B(s))` along the branch cut:
///
/// `μ₂(t) = (2/π) ∫₀^∞ (1 − e^{−rt}) sin(πγ)/ρ · dr/r`.
///
/// The inversion is applied to `2/B(s)` and integrated once in time, which
/// absorbs the pole at `s = 0`. `δ(β − 1)` has no branch cut and takes the
/// closed form.
pub fn moment_curve(density: &OrderDensity, t_grid: &[f64], tol: f64) -> Result<MomentCurve> {
    check_grid(t_grid)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    if density.is_classical() {
        return moment_curve_single(1.0, t_grid);
    }
    let mut mu2 = Vec::with_capacity(t_grid.len());
    let mut abs_error = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let r = ray_integral(
            |u: f64| {
                let lift = -(-t * u.exp()).exp_m1();
                if lift == 0.0 {
                    return Ok(0.0);
                }
                Ok(lift * RayValue::at(density, u)?.im_reciprocal())
            },
            0.5 * tol * PI / 2.0,
            RayOptions::default(),
        )?;
        let err = 2.0 / PI * r.abs_error;
        if err > tol {
            return Err(Error::Quadrature { what: format!("moment curve at t = {t}"), estimate: err, tol });
        }
        mu2.push(2.0 / PI * r.value);
        abs_error.push(err);
    }
    let (small, large) = predicted_laws(density);
    Ok(MomentCurve {
        t_grid: t_grid.to_vec(),
        mu2,
        abs_error,
        method: MomentMethod::LaplaceInversion,
        asymptote_small_t: small,
        asymptote_large_t: large,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_order_inversion_matches_closed_form() {
        let grid = [0.01, 0.5, 1.0, 3.0, 100.0];
        for &nu in &[0.25, 0.5, 0.75] {
            let d = OrderDensity::single(nu).unwrap();
            let a = moment_curve(&d, &grid, 1e-10).unwrap();
            let b = moment_curve_single(nu, &grid).unwrap();
            for (x, y) in a.mu2.iter().zip(&b.mu2) {
                assert!((x - y).abs() < 1e-9 * y.max(1.0), "nu={nu}: {x} vs {y}");
            }
        }
        let c = moment_curve(&OrderDensity::single(1.0).unwrap(), &[3.0], 1e-8).unwrap();
        assert!((c.mu2[0] - 6.0).abs() < 1e-14);
        assert_eq!(c.method, MomentMethod::ClosedFormSingle);
    }

    #[test]
    fn uniform_matches_its_closed_integral() {
        // 2 ∫₀^∞ (1 − e^{−rt}) / (r(1 + r)) dr at t = 1e-2, 1e2
        let curve = moment_curve(&OrderDensity::uniform(), &[1e-2, 1e2], 1e-12).unwrap();
        assert!((curve.mu2[0] - 0.101_113_844_739_734_68).abs() < 1e-11, "{}", curve.mu2[0]);
        assert!((curve.mu2[1] - 10.384_575_586_352_714).abs() < 1e-9, "{}", curve.mu2[1]);
    }

    #[test]
    fn two_atom_matches_frozen_values() {
        // 4 t^{3/4} E_{1/2, 7/4}(−t^{1/2})
        let curve = moment_curve(&OrderDensity::two_atom_preset(), &[1e-3, 1e2], 1e-12).unwrap();
        assert!((curve.mu2[0] - 0.023_860_462_707_073_12).abs() < 1e-12, "{}", curve.mu2[0]);
        assert!((curve.mu2[1] - 12.960_242_054_016_748).abs() < 1e-9, "{}", curve.mu2[1]);
    }

    #[test]
    fn fit_recovers_exact_laws() {
        let t = logspace(1.0, 10.0, 7);
        let law = AsymptoticLaw::Power { exponent: 0.3, prefactor: 1.7 };
        let mu: Vec<f64> = t.iter().map(|&x| law.eval(x)).collect();
        let fit = fit_law(law, &t, &mu).unwrap();
        match fit.law {
            AsymptoticLaw::Power { exponent, prefactor } => {
                assert!((exponent - 0.3).abs() < 1e-12 && (prefactor - 1.7).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let log = AsymptoticLaw::Log { prefactor: 2.0 };
        let mu: Vec<f64> = t.iter().map(|&x| log.eval(x) + 0.4).collect();
        assert!((fit_law(log, &t, &mu).unwrap().law.prefactor() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn logspace_endpoints() {
        let g = logspace(1e-3, 1e3, 25);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[24], 1e3);
        assert!((g[4] - 1e-2).abs() < 1e-15);
    }
}

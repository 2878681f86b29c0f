//! Independent brute-force evaluators used to validate the analytic pipelines:
//! Fourier-cosine and Mellin-Barnes quadratures of the reduced Green function,
//! the double Fourier-Laplace inversion of the distributed-order solution, and
//! a real-axis inverse Laplace transform along the branch cut.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributed_order::{Atom, ContinuousPart, DistributedOrderSolver, OrderDensity};
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, oscillatory_cosine, ray_integral, RayOptions};
use crate::specfun::{ln_gamma_complex, mittag_leffler_neg, rgamma};

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    Ok(())
}

/// `U(x) = (1/π) ∫₀^∞ cos(κx) E_β(−κ²) dκ`.
///
/// At `x = 0` the integral is cut at `K` with `K² ≥ 10^{1/β}`, far enough out for
/// the rest to come from the algebraic expansion of `E_β`; for `x > 0` half-period panels are
/// summed and extrapolated.
pub fn fourier_cosine_u(beta: f64, x: f64, tol: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("fourier_cosine_u: beta = {beta} outside (0, 1]")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(domain(format!("fourier_cosine_u: x = {x} must be finite and >= 0")));
    }
    check_tol(tol)?;
    // Past the cut the three-term expansion must be good to tol/20 when integrated.
    let omitted = |cut: f64| {
        (4..12)
            .map(|j: i32| cut.powi(1 - 2 * j) / (2 * j - 1) as f64 * rgamma(1.0 - beta * j as f64).abs())
            .find(|v| *v != 0.0)
            .unwrap_or(0.0)
    };
    let mut cut = if beta == 1.0 { 10.0 } else { 10f64.powf(0.5 / beta).max(4.0) };
    while beta < 1.0 && 2.0 * omitted(cut) > 0.05 * tol * PI {
        cut *= 1.25;
    }
    // Pointwise accuracy so that the integrated error stays below tol.
    let ml_tol = 0.01 * tol / cut.max(1.0);
    let g = |k: f64| -> Result<f64> { Ok(mittag_leffler_neg(beta, k * k, ml_tol)?.value) };
    let scaled_tol = tol * PI;
    if x == 0.0 {
        let head = integrate(g, 0.0, cut, 0.2 * scaled_tol, 1e-13, 2000)?;
        // ∫_K^∞ Σ_j (−1)^{j+1} κ^{−2j} / Γ(1−βj) dκ
        let tail: f64 = (1..=3)
            .map(|j: i32| {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * cut.powi(1 - 2 * j) / (2 * j - 1) as f64 * rgamma(1.0 - beta * j as f64)
            })
            .sum();
        let err = head.abs_error + 2.0 * omitted(cut);
        if !head.converged || err > scaled_tol {
            return Err(Error::Quadrature {
                what: format!("fourier_cosine_u head at beta = {beta}"),
                estimate: err / PI,
                tol,
            });
        }
        return Ok((head.value + tail) / PI);
    }
    let r = oscillatory_cosine(g, x, 2.0, scaled_tol)?;
    if !r.converged {
        return Err(Error::Quadrature {
            what: format!("fourier_cosine_u at beta = {beta}, x = {x}"),
            estimate: r.abs_error / PI,
            tol,
        });
    }
    Ok(r.value / PI)
}

/// Vertical line `Re s = σ` for the Mellin-Barnes oracle, truncated at
/// `|Im s| ≤ half_height` and sampled with `nodes` trapezoid steps per half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub sigma: f64,
    pub half_height: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub const MIN_NODES: usize = 64;

    pub fn new(sigma: f64, half_height: f64, nodes: usize) -> Result<Self> {
        let c = Self { sigma, half_height, nodes };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(domain(format!("contour: sigma = {} outside (0, 1)", self.sigma)));
        }
        if !(self.half_height > 0.0 && self.half_height.is_finite()) {
            return Err(domain(format!("contour: half_height = {} must be positive", self.half_height)));
        }
        if self.nodes < Self::MIN_NODES {
            return Err(domain(format!("contour: {} nodes, at least {} required", self.nodes, Self::MIN_NODES)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.half_height / self.nodes as f64
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { sigma: 0.5, half_height: 20.0, nodes: 400 }
    }
}

/// `U(x) = (1/2x) (1/2πi) ∫ Γ(1−s)/Γ(1−βs/2) x^s ds` along `Re s = σ`.
///
/// Trapezoid rule on the upper half of the line (the integrand at `s̄` is the
/// conjugate); `half_height` is extended in steps of its initial value until the
/// last extension contributes less than `tol/10`. The step is checked by halving.
pub fn mellin_barnes_u(beta: f64, x: f64, contour: ContourSpec, tol: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain(format!("mellin_barnes_u: beta = {beta} outside (0, 1]")));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain(format!("mellin_barnes_u: x = {x}; the 1/(2x) prefactor needs x > 0")));
    }
    contour.validate()?;
    check_tol(tol)?;
    let ln_x = x.ln();
    let f = |y: f64| -> f64 {
        let s = Complex64::new(contour.sigma, y);
        let one = Complex64::new(1.0, 0.0);
        (ln_gamma_complex(one - s) - ln_gamma_complex(one - s * (0.5 * beta)) + s * ln_x).exp().re
    };
    let prefactor = 1.0 / (4.0 * PI * x);
    let h = contour.step();
    // Sums over nodes j·h (coarse) and (j + ½)·h (midpoints) of the upper half line.
    let mut coarse = 0.5 * f(0.0);
    let mut mid = 0.0;
    let mut height = 0.0;
    let block = contour.nodes;
    let max_height = 400.0_f64.max(contour.half_height);
    loop {
        let (mut dc, mut dm) = (0.0, 0.0);
        for j in 0..block {
            let y = height + j as f64 * h;
            if j > 0 || height > 0.0 {
                dc += f(y);
            }
            dm += f(y + 0.5 * h);
        }
        coarse += dc;
        mid += dm;
        height += block as f64 * h;
        let last = prefactor * 2.0 * h * (dc.abs() + dm.abs());
        if height >= contour.half_height && last < 0.1 * tol {
            break;
        }
        if height >= max_height {
            return Err(Error::Quadrature {
                what: format!("mellin_barnes_u at beta = {beta}, x = {x}: line integral did not decay"),
                estimate: last,
                tol,
            });
        }
    }
    let t_h = prefactor * 2.0 * h * coarse;
    let t_half = prefactor * h * (coarse + mid);
    let err = (t_half - t_h).abs();
    if err > tol {
        return Err(Error::Quadrature {
            what: format!("mellin_barnes_u at beta = {beta}, x = {x}: step too coarse"),
            estimate: err,
            tol,
        });
    }
    Ok(t_half)
}

// Large-κ expansion û(κ, t) ≈ c₁/κ² − c₂/κ⁴ with c₁ = L⁻¹[B(s)/s](t) and
// c₂ = L⁻¹[B(s)²/s](t), using L⁻¹[s^{a−1}] = t^{−a}/Γ(1−a).
fn hat_tail_coefficients(density: &OrderDensity, t: f64) -> Result<(f64, f64)> {
    let w = |a: f64| t.powf(-a) * rgamma(1.0 - a);
    let atoms: &[Atom] = density.atoms();
    let mut c1: f64 = atoms.iter().map(|a| a.weight * w(a.beta)).sum();
    let mut c2 = 0.0;
    for a in atoms {
        for b in atoms {
            c2 += a.weight * b.weight * w(a.beta + b.beta);
        }
    }
    if let Some(c) = density.continuous() {
        let q =
            |f: &dyn Fn(f64) -> f64| -> Result<f64> { Ok(integrate(|x| Ok(f(x)), 0.0, 1.0, 1e-14, 1e-12, 200)?.value) };
        let cf = |b: f64| c.eval(b);
        c1 += q(&|b| cf(b) * w(b))?;
        for a in atoms {
            c2 += 2.0 * a.weight * q(&|b| cf(b) * w(a.beta + b))?;
        }
        c2 += match c {
            // Self-convolution of the uniform density is the triangle on [0, 2].
            ContinuousPart::Uniform { level } => {
                let tri = |s: f64| level * level * s.min(2.0 - s) * w(s);
                integrate(|s| Ok(tri(s)), 0.0, 1.0, 1e-14, 1e-12, 200)?.value
                    + integrate(|s| Ok(tri(s)), 1.0, 2.0, 1e-14, 1e-12, 200)?.value
            }
            ContinuousPart::Function { .. } => q(&|a| cf(a) * q(&|b| cf(b) * w(a + b)).unwrap_or(f64::NAN))?,
        };
    }
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(Error::Quadrature {
            what: "large-kappa coefficients of the characteristic function".into(),
            estimate: f64::INFINITY,
            tol: 0.0,
        });
    }
    Ok((c1, c2))
}

/// `u(x, t) = (1/π) ∫₀^∞ cos(κx) û(κ, t) dκ` with the inner transform
/// `û(κ, t) = ∫₀^∞ (e^{−rt}/r) K(κ, r) dr` from the spectral kernel.
///
/// Each outer node costs one branch-cut quadrature, so this is the slowest
/// evaluator in the crate: about a second per point at `tol = 1e−6`.
pub fn double_inversion_u(density: &OrderDensity, x: f64, t: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("double_inversion_u: t = {t} must be positive")));
    }
    if !x.is_finite() {
        return Err(domain(format!("double_inversion_u: x = {x} must be finite")));
    }
    let x = x.abs();
    let solver = DistributedOrderSolver::new(density.clone());
    let inner_tol = 1e-3 * tol;
    let hat = |k: f64| solver.fourier_hat(k, t, inner_tol);
    let scaled_tol = tol * PI;
    let level = |e: Error| match e {
        Error::Quadrature { what, estimate, tol } => {
            Error::Quadrature { what: format!("double inversion: {what}"), estimate, tol }
        }
        other => other,
    };
    if x == 0.0 {
        let (c1, c2) = hat_tail_coefficients(density, t)?;
        if density.is_classical() {
            return Ok(1.0 / (2.0 * (PI * t).sqrt()));
        }
        // Grow the cut until the two-term expansion matches û there; the
        // neglected tail is then about |û − expansion|·K/5.
        let mut cut: f64 = 2.0;
        loop {
            let d = (hat(cut).map_err(level)? - (c1 / (cut * cut) - c2 / cut.powi(4))).abs();
            if d * cut / 5.0 < 0.05 * scaled_tol {
                break;
            }
            cut *= 1.5;
            if cut > 1e4 {
                return Err(Error::Quadrature {
                    what: "double inversion: large-kappa expansion never matched".into(),
                    estimate: d,
                    tol,
                });
            }
        }
        let head = integrate(hat, 0.0, cut, 0.5 * scaled_tol, 1e-12, 2000).map_err(level)?;
        let tail = c1 / cut - c2 / (3.0 * cut.powi(3));
        if !head.converged {
            return Err(Error::Quadrature {
                what: "double inversion: outer head integral".into(),
                estimate: head.abs_error / PI,
                tol,
            });
        }
        return Ok((head.value + tail) / PI);
    }
    let r = oscillatory_cosine(hat, x, 2.0, scaled_tol).map_err(level)?;
    if !r.converged {
        return Err(Error::Quadrature {
            what: format!("double inversion: outer cosine integral at x = {x}"),
            estimate: r.abs_error / PI,
            tol,
        });
    }
    Ok(r.value / PI)
}

/// A pole of `F` whose contribution `residue · t^{order−1} e^{pt} / (order−1)!`
/// is added to the branch-cut integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub location: f64,
    pub order: u32,
    pub residue: f64,
}

/// A Laplace transform `F(s)` analytic off the negative real axis, evaluated on
/// the upper lip `s = −r + i0` of the cut.
pub struct RayTransform<'a> {
    f: Box<dyn Fn(Complex64) -> Complex64 + 'a>,
    lift: bool,
    poles: Vec<Pole>,
}

impl<'a> RayTransform<'a> {
    pub fn new(f: impl Fn(Complex64) -> Complex64 + 'a) -> Self {
        Self { f: Box::new(f), lift: false, poles: Vec::new() }
    }

    /// A sum of pole terms with no branch cut, such as `1/s`, `1/s²` or `1/(s+1)`.
    pub fn poles_only(poles: Vec<Pole>) -> Self {
        Self { f: Box::new(|_| Complex64::new(0.0, 0.0)), lift: false, poles }
    }

    /// Invert `s F(s)` and integrate once in time. Needed when `F` grows faster
    /// than `1/s` at the origin; the pole at `s = 0` is then absorbed.
    pub fn lifted(mut self) -> Self {
        self.lift = true;
        self
    }

    pub fn with_pole(mut self, pole: Pole) -> Self {
        self.poles.push(pole);
        self
    }

    /// `F` at a real point `s > 0`, for forward checks.
    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(Complex64::new(s, 0.0)).re
    }
}

/// `f(t) = −(1/π) ∫₀^∞ e^{−rt} Im F(r e^{iπ}) dr + Σ pole terms`.
///
/// The ray integral is read as a principal value: poles on the negative axis,
/// including `s = 0`, must be listed with [`RayTransform::with_pole`], and `F`
/// passed to [`RayTransform::new`] should be the part with the cut only (so
/// `F(s) = 1/s` is [`RayTransform::poles_only`] with residue 1 at the origin). With
/// [`RayTransform::lifted`] the integrand becomes `(1 − e^{−rt}) Im[sF(s)] / r`.
pub fn inverse_laplace_ray(transform: &RayTransform<'_>, t: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("inverse_laplace_ray: t = {t} must be positive")));
    }
    let r = ray_integral(
        |u: f64| {
            let r = u.exp();
            let damp = (-t * r).exp();
            if damp == 0.0 && !transform.lift {
                return Ok(0.0);
            }
            let weight = if transform.lift { -(-t * r).exp_m1() } else { damp * r };
            if weight == 0.0 {
                return Ok(0.0);
            }
            let s = Complex64::new(-r, 0.0);
            let mut v = (transform.f)(s);
            if transform.lift {
                v *= s;
            }
            let out = -weight * v.im / PI;
            if !out.is_finite() {
                return Err(Error::Quadrature {
                    what: format!("inverse_laplace_ray: F not finite at s = {s}"),
                    estimate: f64::INFINITY,
                    tol,
                });
            }
            Ok(out)
        },
        0.5 * tol,
        RayOptions::default(),
    )?;
    if r.abs_error > tol {
        return Err(Error::Quadrature { what: format!("inverse_laplace_ray at t = {t}"), estimate: r.abs_error, tol });
    }
    let poles: f64 = transform
        .poles
        .iter()
        .map(|p| {
            let n = p.order.max(1);
            let fact: f64 = (1..n).map(f64::from).product();
            p.residue * t.powi(n as i32 - 1) * (p.location * t).exp() / fact
        })
        .sum();
    Ok(r.value + poles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_order::reduced_green;

    #[test]
    fn fourier_gaussian_at_origin() {
        let v = fourier_cosine_u(1.0, 0.0, 1e-10).unwrap();
        assert!((v - 0.282_094_791_773_878_14).abs() < 1e-10, "{v}");
        let v = fourier_cosine_u(1.0, 1.0, 1e-10).unwrap();
        assert!((v - 0.219_695_644_733_861_1).abs() < 1e-10, "{v}");
    }

    #[test]
    fn fourier_half_order_at_origin() {
        let v = fourier_cosine_u(0.5, 0.0, 1e-9).unwrap();
        assert!((v - 0.408_024_469_549_131_49).abs() < 1e-9, "{v}");
    }

    #[test]
    fn mellin_barnes_gaussian() {
        let v = mellin_barnes_u(1.0, 1.0, ContourSpec::default(), 1e-10).unwrap();
        assert!((v - 0.219_695_644_733_861_1).abs() < 1e-10, "{v}");
    }

    #[test]
    fn mellin_barnes_is_contour_independent() {
        for &s in &[0.3, 0.7] {
            let c = ContourSpec::new(s, 20.0, 400).unwrap();
            let v = mellin_barnes_u(0.5, 1.0, c, 1e-10).unwrap();
            let w = reduced_green(0.5, 1.0, 1e-12).unwrap().value;
            assert!((v - w).abs() < 2e-10, "sigma={s}: {v} vs {w}");
        }
        assert!(mellin_barnes_u(0.5, 0.0, ContourSpec::default(), 1e-8).is_err());
        assert!(ContourSpec::new(0.5, 10.0, 10).is_err());
    }

    #[test]
    fn transform_pairs() {
        let step = RayTransform::poles_only(vec![Pole { location: 0.0, order: 1, residue: 1.0 }]);
        let ramp = RayTransform::poles_only(vec![Pole { location: 0.0, order: 2, residue: 1.0 }]);
        let decay = RayTransform::poles_only(vec![Pole { location: -1.0, order: 1, residue: 1.0 }]);
        let power = RayTransform::new(|s| 2.0 * s.powf(-1.5)).lifted();
        for &t in &[0.3, 1.0, 4.0] {
            assert!((inverse_laplace_ray(&step, t, 1e-10).unwrap() - 1.0).abs() < 1e-10);
            assert!((inverse_laplace_ray(&ramp, t, 1e-10).unwrap() - t).abs() < 1e-10);
            assert!((inverse_laplace_ray(&decay, t, 1e-10).unwrap() - (-t).exp()).abs() < 1e-10);
            let p = inverse_laplace_ray(&power, t, 1e-10).unwrap();
            assert!((p - 4.0 * t.sqrt() / PI.sqrt()).abs() < 1e-9, "t={t}: {p}");
        }
        assert!((power.eval(4.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn logarithmic_pair() {
        // ln s / (s(s − 1)) ↔ ln t + γ_E + e^t E₁(t)
        let log = RayTransform::new(|s: Complex64| s.ln() / (s * (s - 1.0))).lifted();
        for (t, want) in
            [(1e-3, 0.007_334_456_244_883_785_6), (1.0, 1.173_563_027_224_726_9), (1e3, 7.485_969_945_877_693_8)]
        {
            let v = inverse_laplace_ray(&log, t, 1e-12).unwrap();
            assert!((v - want).abs() < 1e-10 * want.max(1.0), "t={t}: {v}");
        }
    }

    #[test]
    fn double_inversion_single_order_origin() {
        let d = OrderDensity::single(0.5).unwrap();
        let v = double_inversion_u(&d, 0.0, 1.0, 1e-6).unwrap();
        assert!((v - 0.408_024_469_549_131_49).abs() < 1e-6, "{v}");
    }
}

//! Self-check suite behind `fracgreen verify`: every law and cross-validation of
//! the crate reduced to a residual against a frozen threshold.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributed_order::{
    branch_cut, collapse_discrepancy, f_closed, f_series, logspace, moment_curve, phi_k, AsymptoticLaw,
    DistributedOrderSolver, OrderDensity,
};
use crate::error::Result;
use crate::fraccalc::law_checks;
use crate::oracles::{
    double_inversion_u, fourier_cosine_u, inverse_laplace_ray, mellin_barnes_u, ContourSpec, Pole, RayTransform,
};
use crate::single_order::{green, numerical_moments, reduced_green, second_moment, spatial_moments};
use crate::specfun::{gamma, mittag_leffler_neg, sin_pi, wright_m};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Reduced grids; a few seconds.
    Fast,
    /// Every acceptance grid, including the asymptotic-law fits.
    Full,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fast => "fast",
            Self::Full => "full",
        })
    }
}

/// One line of the report. `residual` is `None` when the check errored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_name: String,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub profile: Profile,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn any_error(&self) -> bool {
        self.checks.iter().any(|c| c.error.is_some())
    }

    /// 0 if every check passes, 3 if any check errored, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.any_error() {
            3
        } else if self.all_pass() {
            0
        } else {
            1
        }
    }
}

enum Bound {
    /// Pass when `residual ≤ threshold`.
    Upper,
    /// Pass when `residual > threshold`.
    Lower,
}

struct Suite {
    fast: bool,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn run(&mut self, name: &str, threshold: f64, bound: Bound, f: impl FnOnce(bool) -> Result<f64>) {
        let result = match f(self.fast) {
            Ok(r) => {
                let pass = match bound {
                    Bound::Upper => r <= threshold,
                    Bound::Lower => r > threshold,
                };
                CheckResult { check_name: name.into(), residual: Some(r), threshold, pass, error: None }
            }
            Err(e) => CheckResult {
                check_name: name.into(),
                residual: None,
                threshold,
                pass: false,
                error: Some(e.to_string()),
            },
        };
        self.checks.push(result);
    }
}

fn heat_kernel(x: f64, t: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (2.0 * (PI * t).sqrt())
}

fn times(fast: bool) -> &'static [f64] {
    if fast {
        &[1.0]
    } else {
        &[0.5, 1.0, 2.0]
    }
}

fn max_abs<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for v in it {
        m = m.max(v?.abs());
    }
    Ok(m)
}

// |mass − 1|, −min u and the relative gap between the quadrature second moment
// and the branch-cut inversion, for a distributed-order profile at time t.
fn distributed_moments(solver: &DistributedOrderSolver, t: f64) -> Result<(f64, f64, f64)> {
    let m = spatial_moments(|x| Ok(solver.green_with_fallback(x, t, 1e-10)?.value), 0.5, 1e-10)?;
    let mu2 = moment_curve(solver.density(), &[t], 1e-10)?.mu2[0];
    Ok(((m.mass - 1.0).abs(), (-m.min_value).max(0.0), (m.second / mu2 - 1.0).abs()))
}

/// Runs the suite. Never panics; evaluator failures become errored checks.
pub fn run_suite(profile: Profile) -> VerifyReport {
    let mut s = Suite { fast: profile == Profile::Fast, checks: Vec::new() };

    s.run("gaussian_limit", 1e-10, Bound::Upper, |_| {
        let mut worst: f64 = 0.0;
        for &t in &[0.5, 1.0, 2.0] {
            for i in -40..=40 {
                let x = 0.1 * i as f64;
                worst = worst.max((green(1.0, x, t, 1e-10)?.value - heat_kernel(x, t)).abs());
            }
        }
        Ok(worst)
    });
    s.run("m_function_origin", 1e-14, Bound::Upper, |_| {
        Ok((wright_m(0.25, 0.0, 1e-12)?.value - 0.816_048_939_098_262_981).abs())
    });
    s.run("m_function_gaussian", 1e-10, Bound::Upper, |_| {
        max_abs((0..=60).map(|i| {
            let x = 0.1 * i as f64;
            Ok(wright_m(0.5, x, 1e-10)?.value - (-x * x / 4.0).exp() / PI.sqrt())
        }))
    });
    s.run("reduced_green_half_order_origin", 1e-14, Bound::Upper, |_| {
        Ok((reduced_green(0.5, 0.0, 1e-12)?.value - 0.408_024_469_549_131_49).abs())
    });
    s.run("mittag_leffler_erfc_value", 1e-12, Bound::Upper, |_| {
        Ok((mittag_leffler_neg(0.5, 1.0, 1e-13)?.value - 0.427_583_576_155_807_004).abs())
    });
    for beta in [0.25, 0.5, 0.75] {
        s.run(&format!("dual_strategy_beta_{beta}"), 2e-7, Bound::Upper, |_| {
            let mut worst: f64 = 0.0;
            for x in [0.0, 0.5, 1.0, 2.0, 4.0] {
                let a = reduced_green(beta, x, 1e-10)?.value;
                let b = fourier_cosine_u(beta, x, 1e-9)?;
                worst = worst.max((a - b).abs());
                if x > 0.0 {
                    let c = mellin_barnes_u(beta, x, ContourSpec::default(), 1e-10)?;
                    worst = worst.max((a - c).abs()).max((b - c).abs());
                }
            }
            Ok(worst)
        });
    }
    s.run("mellin_barnes_contour_independence", 2e-10, Bound::Upper, |_| {
        let base = mellin_barnes_u(0.5, 1.0, ContourSpec::default(), 1e-10)?;
        max_abs(
            [0.3, 0.7]
                .iter()
                .map(|&sigma| Ok(mellin_barnes_u(0.5, 1.0, ContourSpec::new(sigma, 20.0, 800)?, 1e-10)? - base)),
        )
    });
    s.run("normalization_single_order", 1e-6, Bound::Upper, |fast| {
        let mut worst: f64 = 0.0;
        for beta in [0.25, 0.5, 0.75, 1.0] {
            for &t in times(fast) {
                worst = worst.max((numerical_moments(beta, t, 1e-10)?.mass - 1.0).abs());
            }
        }
        Ok(worst)
    });
    s.run("nonnegativity_single_order", 1e-8, Bound::Upper, |fast| {
        let mut worst: f64 = 0.0;
        for beta in [0.25, 0.5, 0.75, 1.0] {
            for &t in times(fast) {
                worst = worst.max(-numerical_moments(beta, t, 1e-10)?.min_value);
            }
        }
        Ok(worst.max(0.0))
    });
    for (name, density) in [("two_atom", OrderDensity::two_atom_preset()), ("uniform", OrderDensity::uniform())] {
        let solver = DistributedOrderSolver::new(density);
        let mut results = Vec::new();
        let fast = s.fast;
        let collected: Result<()> = (|| {
            for &t in times(fast) {
                results.push(distributed_moments(&solver, t)?);
            }
            Ok(())
        })();
        let fold = |pick: fn(&(f64, f64, f64)) -> f64| -> Result<f64> {
            collected.clone()?;
            Ok(results.iter().map(pick).fold(0.0, f64::max))
        };
        let (mass, neg, second) = (fold(|r| r.0), fold(|r| r.1), fold(|r| r.2));
        s.run(&format!("normalization_{name}"), 1e-6, Bound::Upper, |_| mass);
        s.run(&format!("nonnegativity_{name}"), 1e-8, Bound::Upper, |_| neg);
        s.run(&format!("second_moment_consistency_{name}"), 1e-6, Bound::Upper, |_| second);
    }
    s.run("variance_law", 1e-5, Bound::Upper, |fast| {
        let mut worst: f64 = 0.0;
        for beta in [0.25, 0.5, 0.75] {
            for &t in times(fast) {
                let want = second_moment(beta, t)?;
                worst = worst.max((numerical_moments(beta, t, 1e-10)?.second - want).abs() / want);
            }
        }
        Ok(worst)
    });
    s.run("branch_cut_single_order", 1e-13, Bound::Upper, |_| {
        let mut worst: f64 = 0.0;
        for nu in [0.25, 0.5, 0.75] {
            let d = OrderDensity::single(nu)?;
            for r in [1e-4, 0.5, 1.0, 3.0, 1e4] {
                let p = branch_cut(&d, r)?;
                worst = worst.max((p.rho / r.powf(nu) - 1.0).abs()).max((p.gamma - nu).abs());
            }
        }
        Ok(worst)
    });
    s.run("phi_k_single_order", 1e-8, Bound::Upper, |fast| {
        let mut worst: f64 = 0.0;
        for nu in [0.25, 0.5, 0.75] {
            let d = OrderDensity::single(nu)?;
            for k in 0..=8 {
                for &t in times(fast) {
                    let a = 0.5 * nu * (k + 1) as f64;
                    let want = sin_pi(a) * gamma(a) / t.powf(a);
                    worst = worst.max((phi_k(&d, k, t, 1e-10)? - want).abs());
                }
            }
        }
        Ok(worst)
    });
    s.run("green_series_single_order", 1e-6, Bound::Upper, |fast| {
        let mut worst: f64 = 0.0;
        for nu in [0.25, 0.5, 0.75] {
            let solver = DistributedOrderSolver::new(OrderDensity::single(nu)?);
            for &t in times(fast) {
                for x in [0.0, 0.5, 1.0, 2.0, 3.0] {
                    worst = worst.max((solver.green_series(x, t, 1e-9)?.value - green(nu, x, t, 1e-10)?.value).abs());
                }
            }
        }
        Ok(worst)
    });
    s.run("f_series_closed_form", 1e-12, Bound::Upper, |_| {
        let mut worst: f64 = 0.0;
        for g in [0.25, 0.5, 1.0] {
            for y in [0.5, 2.0] {
                worst = worst.max((f_series(g, y, 1e-13)?.value - f_closed(g, y)).abs());
            }
        }
        Ok(worst)
    });
    s.run("fourier_hat_single_order", 1e-7, Bound::Upper, |_| {
        let solver = DistributedOrderSolver::new(OrderDensity::single(0.5)?);
        Ok((solver.fourier_hat(1.0, 1.0, 1e-10)? - mittag_leffler_neg(0.5, 1.0, 1e-12)?.value).abs())
    });
    s.run("fourier_hat_total_probability", 1e-5, Bound::Upper, |_| {
        max_abs(
            [OrderDensity::two_atom_preset(), OrderDensity::uniform()]
                .into_iter()
                .map(|d| Ok(DistributedOrderSolver::new(d).fourier_hat(1e-3, 1.0, 1e-10)? - 1.0)),
        )
    });
    s.run("inverse_laplace_pairs", 1e-6, Bound::Upper, |_| {
        type Pair<'a> = (RayTransform<'a>, fn(f64) -> f64);
        let pairs: Vec<Pair> = vec![
            (RayTransform::poles_only(vec![Pole { location: 0.0, order: 1, residue: 1.0 }]), |_| 1.0),
            (RayTransform::poles_only(vec![Pole { location: 0.0, order: 2, residue: 1.0 }]), |t| t),
            (RayTransform::poles_only(vec![Pole { location: -1.0, order: 1, residue: 1.0 }]), |t| (-t).exp()),
            (RayTransform::new(|s: Complex64| s.powf(-1.5)).lifted(), |t| t.sqrt() / gamma(1.5)),
            // ln t + γ_E + e^t E₁(t) at t = 1
            (RayTransform::new(|s: Complex64| s.ln() / (s * (s - 1.0))).lifted(), |_| 1.173_563_027_224_726_9),
        ];
        max_abs(pairs.iter().map(|(tr, f)| Ok(inverse_laplace_ray(tr, 1.0, 1e-9)? - f(1.0))))
    });
    s.run("moment_inversion_single_order", 1e-6, Bound::Upper, |_| {
        let c = moment_curve(&OrderDensity::single(0.5)?, &[1.0], 1e-9)?;
        Ok((c.mu2[0] - 4.0 / PI.sqrt()).abs())
    });
    s.run("double_inversion_two_atom", 1e-5, Bound::Upper, |fast| {
        let d = OrderDensity::two_atom_preset();
        let solver = DistributedOrderSolver::new(d.clone());
        let xs: &[f64] = if fast { &[0.0, 1.0] } else { &[0.0, 0.5, 1.0, 2.0] };
        let mut worst: f64 = 0.0;
        for &t in times(fast) {
            for &x in xs {
                worst = worst.max((solver.green_series(x, t, 1e-9)?.value - double_inversion_u(&d, x, t, 1e-6)?).abs());
            }
        }
        Ok(worst)
    });
    let laws = law_checks(if s.fast { 100 } else { 200 });
    for law in ["semigroup", "left_inverse", "caputo_offset", "laplace_rule"] {
        // Residual relative to the frozen grid-order bound; passes at ≤ 1.
        s.run(&format!("fractional_{law}"), 1.0, Bound::Upper, |_| {
            let laws = laws.clone()?;
            Ok(laws.iter().filter(|c| c.law == law).map(|c| c.residual / c.threshold).fold(0.0, f64::max))
        });
    }
    s.run("self_similarity_single_order", 1e-8, Bound::Upper, |_| {
        let solver = DistributedOrderSolver::new(OrderDensity::single(0.5)?);
        collapse_discrepancy(&solver, 0.25, (0.5, 2.0), &[0.0, 0.5, 1.0, 1.5, 2.0, 3.0], 1e-11)
    });
    s.run("self_similarity_loss_two_atom", 1e-3, Bound::Lower, |fast| {
        let solver = DistributedOrderSolver::new(OrderDensity::two_atom_preset());
        let step: f64 = if fast { 0.1 } else { 0.05 };
        let n = (0.9 / step).round() as usize;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            let c = 0.05 + step * i as f64;
            best = best.min(collapse_discrepancy(&solver, c, (0.5, 2.0), &[0.0, 0.5, 1.0, 1.5, 2.0, 3.0], 1e-9)?);
        }
        Ok(best)
    });
    if !s.fast {
        let grid = logspace(1e-3, 1e3, 25);
        let two = moment_curve(&OrderDensity::two_atom_preset(), &grid, 1e-9);
        let fit_dev = |slope: bool| -> Result<f64> {
            let c = two.clone()?;
            let mut worst: f64 = 0.0;
            for (fit, want) in [(c.fit_small_t(), c.asymptote_small_t), (c.fit_large_t(), c.asymptote_large_t)] {
                if let (Some(fit), Some(AsymptoticLaw::Power { exponent, prefactor })) = (fit, want) {
                    if let AsymptoticLaw::Power { exponent: e, prefactor: p } = fit.law {
                        worst = worst.max(if slope { (e / exponent - 1.0).abs() } else { (p / prefactor - 1.0).abs() });
                    }
                }
            }
            Ok(worst)
        };
        s.run("slow_diffusion_slopes", 0.02, Bound::Upper, |_| fit_dev(true));
        s.run("slow_diffusion_prefactors", 0.05, Bound::Upper, |_| fit_dev(false));
        s.run("super_slow_diffusion_ratios", 0.05, Bound::Upper, |_| {
            let tr = RayTransform::new(|s: Complex64| 2.0 * s.ln() / (s * (s - 1.0))).lifted();
            let large = inverse_laplace_ray(&tr, 1e3, 1e-9)? / (2.0 * 1e3f64.ln());
            let small = inverse_laplace_ray(&tr, 1e-3, 1e-12)? / (2.0 * 1e-3 * (1e3f64).ln());
            Ok((large - 1.0).abs().max((small - 1.0).abs()))
        });
    }
    VerifyReport { profile, checks: s.checks }
}

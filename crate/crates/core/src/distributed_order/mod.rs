//! Distributed-order time-fractional diffusion: the order density and its
//! transform `B(s)`, branch-cut data on the negative real axis, the spectral
//! kernel, the time-scale functions `φ_k`, the fundamental solution and the
//! second moment.
//!
//! Every integral over `r ∈ (0, ∞)` is taken in `u = ln r` with `B` evaluated
//! in scaled form, so the densities' algebraic and logarithmic behaviour at
//! both ends of the ray never under- or overflows.

mod branch;
mod density;
mod green;
mod moments;

pub use branch::{branch_cut, kernel_k, BranchCutPoint};
pub use density::{Atom, ContinuousPart, OrderDensity, Smoothness, NORMALIZATION_TOL};
pub use green::{
    collapse_discrepancy, collapse_scan, f_closed, f_series, fourier_hat, green_series, phi_k, DistributedOrderSolver,
    PhiValue, GREEN_SERIES_MAX_TERMS,
};
pub use moments::{
    fit_law, logspace, moment_curve, moment_curve_single, AsymptoteFit, AsymptoticLaw, MomentCurve, MomentMethod,
};

use num_complex::Complex64;

use crate::error::Result;

/// `B(s) = ∫ b(β) s^β dβ`.
pub fn b_transform(density: &OrderDensity, s: Complex64) -> Result<Complex64> {
    density.b_transform(s)
}

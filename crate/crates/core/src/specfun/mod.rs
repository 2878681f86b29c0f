//! Special functions of the single-order theory: the Wright-type M-function and
//! the Mittag-Leffler function on the negative real axis.
//!
//! Series evaluations return a [`SeriesValue`] carrying a truncation-plus-rounding
//! error estimate. Alternating series whose terms dwarf the sum are reported as
//! [`Error::PrecisionLoss`](crate::Error::PrecisionLoss) instead of a wrong number.

pub mod gamma;
mod mittag_leffler;
mod sum;
mod wright;

pub use gamma::{cos_pi, gamma, ln_gamma, ln_gamma_complex, rgamma, set_test_perturbation, sin_pi};
pub use mittag_leffler::{
    mittag_leffler_asymptotic, mittag_leffler_neg, mittag_leffler_series, mittag_leffler_spectral,
};
pub use sum::{CompensatedSum, SeriesDriver, SeriesTerm, MAX_SERIES_TERMS};
pub use wright::{wright_m, wright_m_integral, wright_m_reflection};

use serde::{Deserialize, Serialize};

/// A numerical value with its error estimate and the work spent on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesValue {
    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self { value: self.value * factor, abs_error_estimate: self.abs_error_estimate * factor.abs(), ..self }
    }
}

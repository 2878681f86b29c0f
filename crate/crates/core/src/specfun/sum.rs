use crate::error::{Error, Result};

use super::SeriesValue;

/// Hard cap on the number of terms of any power series in the crate.
pub const MAX_SERIES_TERMS: usize = 500;

/// Neumaier-compensated running sum that also tracks `Σ|term|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += term.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub fn compensation(&self) -> f64 {
        self.compensation
    }
}

/// One term of a power series as produced by a [`SeriesDriver`] callback.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTerm {
    pub value: f64,
    /// Upper bound on `|value|` that decays monotonically once past its peak; the
    /// tail of the series is bounded geometrically from consecutive envelopes.
    pub envelope: f64,
    /// Relative error of `value` from evaluating it (not from summation).
    pub rel_error: f64,
    /// Absolute evaluation error on top of `rel_error`, for terms built from
    /// quadratures that may vanish.
    pub abs_error: f64,
}

impl SeriesTerm {
    pub fn new(value: f64, envelope: f64, rel_error: f64) -> Self {
        Self { value, envelope, rel_error, abs_error: 0.0 }
    }
}

/// Sums a power series term by term with the crate's stopping rule:
/// stop once the geometric bound on the remainder is below `tol/2` both absolutely
/// and relative to the partial sum; declare [`Error::PrecisionLoss`] once the
/// accumulated rounding error of the terms exceeds `tol/2`.
#[derive(Debug, Clone, Copy)]
pub struct SeriesDriver {
    pub what: &'static str,
    pub tol: f64,
    pub max_terms: usize,
}

impl SeriesDriver {
    pub fn new(what: &'static str, tol: f64) -> Self {
        Self { what, tol, max_terms: MAX_SERIES_TERMS }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn run<F>(&self, mut term: F) -> Result<SeriesValue>
    where
        F: FnMut(usize) -> Result<SeriesTerm>,
    {
        let half_tol = 0.5 * self.tol;
        let mut acc = CompensatedSum::default();
        let mut rounding = 0.0;
        let mut current = term(0)?;
        let mut k = 0;
        loop {
            if !(current.value.is_finite() && current.envelope.is_finite()) {
                return Err(Error::PrecisionLoss {
                    what: self.what,
                    estimate: f64::INFINITY,
                    tol: self.tol,
                    terms: k + 1,
                });
            }
            acc.add(current.value);
            rounding += current.value.abs() * current.rel_error + current.abs_error;
            // Neumaier's bound: 2u|S| + O(n u²) Σ|t|, with u = ε/2.
            let n = (k + 1) as f64;
            let summation = f64::EPSILON * acc.value().abs() + n * f64::EPSILON * f64::EPSILON * acc.abs_sum();
            let cancellation = rounding + summation;
            if cancellation > half_tol {
                return Err(Error::PrecisionLoss {
                    what: self.what,
                    estimate: cancellation,
                    tol: self.tol,
                    terms: k + 1,
                });
            }
            if k + 1 >= self.max_terms {
                return Ok(SeriesValue {
                    value: acc.value(),
                    abs_error_estimate: cancellation + current.envelope,
                    terms_used: k + 1,
                    converged: false,
                });
            }
            let next = term(k + 1)?;
            let ratio = if current.envelope > 0.0 { next.envelope / current.envelope } else { 0.0 };
            if next.envelope == 0.0 || ratio < 1.0 {
                let remainder = if next.envelope == 0.0 { 0.0 } else { next.envelope / (1.0 - ratio) };
                let sum = acc.value().abs();
                if remainder <= half_tol && remainder <= half_tol * sum.max(1e-300) {
                    return Ok(SeriesValue {
                        value: acc.value(),
                        abs_error_estimate: cancellation + remainder,
                        terms_used: k + 1,
                        converged: true,
                    });
                }
            }
            current = next;
            k += 1;
        }
    }
}

/// Relative error of `exp(Σ components)` when each component carries unit
/// roundoff relative to its own magnitude.
pub(crate) fn log_term_error(components: &[f64]) -> f64 {
    f64::EPSILON * (4.0 + components.iter().map(|c| c.abs()).sum::<f64>())
}

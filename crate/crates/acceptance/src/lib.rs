//! Reporting helpers for the acceptance suite in `tests/acceptance.rs`.
//!
//! Lives in its own package so that `cargo test --workspace` runs it after every
//! library test target.

use std::time::{Duration, Instant};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
    pub detail: String,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.residual <= self.threshold && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    /// `PASS`/`FAIL` line for the test log.
    pub fn line(&self) -> String {
        let budget = self.budget.map_or(String::new(), |b| format!(" (budget {:.0?})", b));
        format!(
            "{} criterion {:>2} {}: residual {:.3e} <= {:.3e}, {:.2?}{}{}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.residual,
            self.threshold,
            self.elapsed,
            budget,
            if self.detail.is_empty() { String::new() } else { format!(" [{}]", self.detail) },
        )
    }
}

/// Times `f` and prints the verdict line.
pub fn check<F>(id: u32, name: &'static str, threshold: f64, budget: Option<Duration>, f: F) -> Verdict
where
    F: FnOnce() -> (f64, String),
{
    let start = Instant::now();
    let (residual, detail) = f();
    let v = Verdict { id, name, residual, threshold, elapsed: start.elapsed(), budget, detail };
    println!("{}", v.line());
    v
}

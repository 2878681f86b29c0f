//! Riemann-Liouville and Caputo operators on sampled functions, and the
//! composition laws they satisfy to grid order.

use fracgreen::fraccalc::{caputo_derivative, law_checks, rl_derivative, rl_integral, SampledFunction};
use fracgreen::specfun::gamma;

fn main() -> fracgreen::Result<()> {
    // J^α t = t^{1+α}/Γ(2+α), D^β t = t^{1−β}/Γ(2−β); the Caputo derivative of 1 + t drops the constant.
    let f = SampledFunction::graded(1.0, 400, 2.0, |t| 1.0 + t)?;
    for order in [0.3, 0.5, 0.8] {
        let t = 0.8f64;
        println!(
            "order {order}: J f = {:.10} (exact {:.10}), D f = {:.8} (exact {:.8}), D* f = {:.8} (exact {:.8})",
            rl_integral(&f, order, t)?,
            t.powf(order) / gamma(order + 1.0) + t.powf(order + 1.0) / gamma(order + 2.0),
            rl_derivative(&f, order, t)?,
            t.powf(-order) / gamma(1.0 - order) + t.powf(1.0 - order) / gamma(2.0 - order),
            caputo_derivative(&f, order, t)?,
            t.powf(1.0 - order) / gamma(2.0 - order),
        );
    }

    println!("\n{:<14} {:<14} {:>5} {:>11} {:>11}", "law", "function", "order", "residual", "bound");
    for c in law_checks(200)? {
        println!("{:<14} {:<14} {:>5} {:>11.3e} {:>11.3e}", c.law, c.function, c.order, c.residual, c.threshold);
    }
    Ok(())
}

//! The M-function by its two series forms and the Hankel integral, including
//! the range where the series give up.

use fracgreen::specfun::{wright_m, wright_m_integral, wright_m_reflection, SeriesValue};
use fracgreen::Error;

fn cell(v: fracgreen::Result<SeriesValue>) -> fracgreen::Result<String> {
    match v {
        Ok(v) => Ok(format!("{:22.15e}", v.value)),
        Err(Error::PrecisionLoss { .. }) => Ok(format!("{:>22}", "precision loss")),
        Err(e) => Err(e),
    }
}

fn main() -> fracgreen::Result<()> {
    let tol = 1e-10;
    println!("{:>6} {:>5} {:>22} {:>22} {:>22}", "nu", "x", "reciprocal-gamma", "reflection", "hankel integral");
    for nu in [0.25, 0.5, 0.75] {
        for x in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let (a, b) = (cell(wright_m(nu, x, tol))?, cell(wright_m_reflection(nu, x, tol))?);
            // The integral is only damped for nu <= 1/2.
            let c = if nu <= 0.5 { cell(wright_m_integral(nu, x, tol))? } else { format!("{:>22}", "-") };
            println!("{nu:6.2} {x:5.1} {a} {b} {c}");
        }
    }

    // Far out the terms grow to ~1e8 while the value is ~1e-9.
    match wright_m(0.125, 20.0, tol) {
        Err(e @ Error::PrecisionLoss { .. }) => println!("\nseries at nu = 1/8, x = 20: {e}"),
        other => println!("\nseries at nu = 1/8, x = 20: {other:?}"),
    }
    println!("hankel integral: {:.6e}", wright_m_integral(0.125, 20.0, 1e-14)?.value);
    Ok(())
}

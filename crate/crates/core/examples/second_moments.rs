//! Second moments across six decades of time: the slow and super-slow laws and
//! how closely the end decades follow them.

use fracgreen::distributed_order::{logspace, moment_curve, OrderDensity};

fn main() -> fracgreen::Result<()> {
    let grid = logspace(1e-3, 1e3, 25);
    for density in [OrderDensity::two_atom_preset(), OrderDensity::uniform()] {
        let curve = moment_curve(&density, &grid, 1e-10)?;
        println!("density {}", density.spec_string());
        for (t, m) in curve.t_grid.iter().zip(&curve.mu2).step_by(4) {
            println!("  t = {t:8.1e}  mu2 = {m:.10e}");
        }
        for (end, fit, law) in [
            ("small t", curve.fit_small_t(), curve.asymptote_small_t),
            ("large t", curve.fit_large_t(), curve.asymptote_large_t),
        ] {
            if let (Some(fit), Some(law)) = (fit, law) {
                println!("  {end}: fitted {:?}\n           predicted {law:?}", fit.law);
            }
        }
        println!();
    }
    Ok(())
}

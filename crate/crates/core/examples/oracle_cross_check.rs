//! Independent routes to the same numbers: the series against the cosine
//! transform, the Mellin-Barnes integral and the double Laplace-Fourier inversion.

use fracgreen::distributed_order::{DistributedOrderSolver, OrderDensity};
use fracgreen::oracles::{double_inversion_u, fourier_cosine_u, mellin_barnes_u, ContourSpec};
use fracgreen::single_order::reduced_green;

fn main() -> fracgreen::Result<()> {
    println!("{:>5} {:>4} {:>20} {:>11} {:>11}", "beta", "x", "series", "cosine", "mellin");
    for beta in [0.25, 0.5, 0.75] {
        for x in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let s = reduced_green(beta, x, 1e-10)?.value;
            let c = fourier_cosine_u(beta, x, 1e-9)? - s;
            let m = if x > 0.0 {
                format!("{:11.2e}", mellin_barnes_u(beta, x, ContourSpec::default(), 1e-10)? - s)
            } else {
                format!("{:>11}", "-")
            };
            println!("{beta:5.2} {x:4.1} {s:20.15} {c:11.2e} {m}");
        }
    }

    let d = OrderDensity::two_atom_preset();
    let solver = DistributedOrderSolver::new(d.clone());
    println!("\ntwo atoms: series vs double inversion");
    for t in [0.5, 1.0, 2.0] {
        for x in [0.0, 1.0, 2.0] {
            let s = solver.green_series(x, t, 1e-9)?.value;
            println!("  t = {t}, x = {x}: {s:.12} (diff {:.1e})", double_inversion_u(&d, x, t, 1e-7)? - s);
        }
    }
    Ok(())
}

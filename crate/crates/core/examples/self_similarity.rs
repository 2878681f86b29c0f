//! Rescaling two time slices with one exponent c: the single-order profile
//! collapses at c = ν/2, the two-atom mixture does not collapse for any c.

use fracgreen::distributed_order::{collapse_scan, DistributedOrderSolver, OrderDensity};

fn main() -> fracgreen::Result<()> {
    let xs = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0];
    let exponents: Vec<f64> = (1..=19).map(|i| 0.05 * i as f64).collect();
    let single = DistributedOrderSolver::new(OrderDensity::single(0.5)?);
    let mixed = DistributedOrderSolver::new(OrderDensity::two_atom_preset());
    let a = collapse_scan(&single, &exponents, (0.5, 2.0), &xs, 1e-10)?;
    let b = collapse_scan(&mixed, &exponents, (0.5, 2.0), &xs, 1e-10)?;
    println!("{:>5} {:>14} {:>14}", "c", "single:0.5", "two atoms");
    for ((c, da), (_, db)) in a.iter().zip(&b) {
        println!("{c:5.2} {da:14.3e} {db:14.3e}");
    }
    let best = b.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    println!("\nsmallest two-atom discrepancy on the grid: {best:.3e}");
    Ok(())
}

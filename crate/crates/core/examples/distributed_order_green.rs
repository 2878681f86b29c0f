//! Distributed-order Green functions for the two presets and a custom density:
//! branch-cut data, time-scale functions and the profile by series and integral.

use fracgreen::distributed_order::{branch_cut, DistributedOrderSolver, OrderDensity, Smoothness};

fn main() -> fracgreen::Result<()> {
    let custom = OrderDensity::with_function(Vec::new(), |b| 2.0 * b, 2.0, Smoothness::Smooth, "2b")?;
    for density in [OrderDensity::two_atom_preset(), OrderDensity::uniform(), custom] {
        println!("density {}", density.spec_string());
        for r in [1e-3, 1.0, 1e3] {
            let p = branch_cut(&density, r)?;
            println!("  r = {r:7.0e}: rho = {:.6e}, gamma = {:.6}", p.rho, p.gamma);
        }
        let solver = DistributedOrderSolver::new(density);
        let phis: Vec<String> =
            (0..5).map(|k| solver.phi(k, 1.0).map(|p| format!("{:.6}", p.value))).collect::<Result<_, _>>()?;
        println!("  phi_0..4(1) = {}", phis.join(", "));
        for x in [0.0, 1.0, 2.0, 4.0] {
            let s = solver.green_series(x, 1.0, 1e-10)?;
            let i = solver.green_integral(x, 1.0, 1e-10)?;
            println!("  u({x}, 1): series {:.12e}, integral {:.12e}", s.value, i.value);
        }
        let far = solver.green_with_fallback(10.0, 1.0, 1e-10)?;
        println!("  u(10, 1) = {:.3e} via {}\n", far.value, far.method);
    }
    Ok(())
}

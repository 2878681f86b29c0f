//! Single-order Green functions: profiles, scaling in time and the variance law.

use fracgreen::single_order::{green_with_fallback, numerical_moments, second_moment};

fn main() -> fracgreen::Result<()> {
    let orders = [0.25, 0.5, 0.75, 1.0];
    print!("{:>5}", "x");
    for b in orders {
        print!(" {:>14}", format!("beta={b}"));
    }
    println!();
    for i in 0..=12 {
        let x = 0.5 * i as f64;
        print!("{x:5.1}");
        for beta in orders {
            print!(" {:14.8e}", green_with_fallback(beta, x, 1.0, 1e-10)?.value);
        }
        println!();
    }

    println!("\n{:>5} {:>5} {:>16} {:>16} {:>16}", "beta", "t", "mass - 1", "variance", "2t^b/G(b+1)");
    for beta in orders {
        for t in [0.5, 2.0] {
            let m = numerical_moments(beta, t, 1e-10)?;
            println!("{beta:5.2} {t:5.1} {:16.3e} {:16.10} {:16.10}", m.mass - 1.0, m.second, second_moment(beta, t)?);
        }
    }
    Ok(())
}

//! E_β(−y) across the series, crossover and asymptotic regimes, against the
//! spectral integral.

use fracgreen::specfun::{mittag_leffler_asymptotic, mittag_leffler_neg, mittag_leffler_spectral};

fn main() -> fracgreen::Result<()> {
    println!("{:>5} {:>10} {:>22} {:>22} {:>10}", "beta", "y", "E_beta(-y)", "spectral", "terms");
    for beta in [0.25, 0.5, 0.75, 1.0] {
        for y in [0.1, 1.0, 10.0, 1e3, 1e5] {
            let v = mittag_leffler_neg(beta, y, 1e-12)?;
            let s = if beta < 1.0 {
                format!("{:22.15e}", mittag_leffler_spectral(beta, y, 1e-13)?.value)
            } else {
                format!("{:>22}", "-")
            };
            println!("{beta:5.2} {y:10.1e} {:22.15e} {s} {:10}", v.value, v.terms_used);
        }
    }
    // E_{1/2}(−1) = e·erfc(1)
    println!("\nE_1/2(-1) = {:.16}", mittag_leffler_neg(0.5, 1.0, 1e-14)?.value);
    let a = mittag_leffler_asymptotic(0.5, 400.0, 1e-8)?;
    println!("three-term expansion at y = 400: {:.12e} +- {:.1e}", a.value, a.abs_error_estimate);
    Ok(())
}

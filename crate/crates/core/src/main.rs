use std::io;

fn main() {
    // Test hook: scales every Γ value, so the self-checks can be shown to react.
    if let Some(p) = std::env::var("FRACGREEN_PERTURB_GAMMA").ok().and_then(|v| v.parse::<f64>().ok()) {
        fracgreen::specfun::set_test_perturbation(p);
    }
    let tol = std::env::var(fracgreen::cli::TOL_ENV).ok();
    let code =
        fracgreen::cli::run(std::env::args_os(), tol.as_deref(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}

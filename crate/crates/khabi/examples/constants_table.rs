//! Compute the sharp-constant pipeline over a grid of lower orders and print
//! the assembled table with its oracle residuals.
//!
//! ```sh
//! cargo run --release --example constants_table
//! ```

use khabi::constants::{constants_report, ToleranceProfile};
use khabi::ProblemParams;

fn main() -> Result<(), khabi::Error> {
    let profile = ToleranceProfile::default();
    println!(
        "{:>2} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12}  oracles",
        "n", "rho", "P_n", "deficiency", "J(rho)", "K_n", "e^(n-1)P_n"
    );
    for n in [2u32, 3, 4] {
        for rho in [1.25f64, 1.5, 2.0, 3.0, 5.0] {
            let params = ProblemParams::new(n, rho)?;
            let r = constants_report(&params, &profile)?;
            println!(
                "{:>2} {:>6} {:>12.6} {:>12.3e} {:>12.6} {:>12.6} {:>12.6}  {}",
                r.n,
                r.rho,
                r.p_n,
                r.deficiency,
                r.j_sup,
                r.k_n,
                r.upper_bound,
                if r.all_passed() { "all pass" } else { "FAILED" }
            );
        }
    }
    println!();
    println!("worst residuals for (n, rho) = (3, 2):");
    let r = constants_report(&ProblemParams::new(3, 2.0)?, &profile)?;
    for (name, value) in &r.oracle_residuals {
        println!("  {name:<28} {value:.3e}");
    }
    Ok(())
}

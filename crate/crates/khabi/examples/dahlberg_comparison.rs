//! Compare the subharmonic extremal value `vartheta(u_rho)` against the
//! sharp plurisubharmonic constant `K_n(rho)` and the classical bound
//! `e^(n-1) P_n(rho)`.
//!
//! ```sh
//! cargo run --release --example dahlberg_comparison
//! ```

use khabi::constants::{constants_report, ToleranceProfile};
use khabi::dahlberg::compare;
use khabi::ProblemParams;

fn main() -> Result<(), khabi::Error> {
    let profile = ToleranceProfile::default();
    println!(
        "{:>2} {:>6} {:>12} {:>14} {:>14} {:>14} {:>8} {:>8}",
        "n", "rho", "theta*", "vartheta", "K_n", "e^(n-1)P_n", ">=K_n", ">e^..P"
    );
    for n in [2u32, 3] {
        for rho in [1.25f64, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let params = ProblemParams::new(n, rho)?;
            let consts = constants_report(&params, &profile)?;
            let r = compare(n, rho, &consts)?;
            println!(
                "{:>2} {:>6} {:>12.8} {:>14.6} {:>14.6} {:>14.6} {:>8} {:>8}",
                n, rho, r.theta_star, r.vartheta, r.k_n, r.e_pow_p, r.at_least_k_n, r.exceeds_e_pow_p
            );
        }
    }
    println!();
    println!("closed forms track the defining ratio:");
    for rho in [1.5f64, 2.0, 5.0] {
        let params = ProblemParams::new(3, rho)?;
        let consts = constants_report(&params, &profile)?;
        let r = compare(3, rho, &consts)?;
        println!(
            "  n=3 rho={rho}: residual {:.2e}, best-fit multiplier {:.9}",
            r.closed_form_residual.unwrap(),
            r.reference_coefficient.unwrap()
        );
    }
    Ok(())
}

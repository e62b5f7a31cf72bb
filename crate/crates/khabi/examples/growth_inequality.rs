//! Admissibility of candidate functions: the saturating power `s_0`, a
//! scaled violation, and the strict perturbation gain that witnesses
//! non-attainment of the supremum.
//!
//! ```sh
//! cargo run --release --example growth_inequality
//! ```

use khabi::constants::p_n;
use khabi::functional::{
    check_inc_rho, iterate_with_epsilons, j_functional, perturbation_gain, AnalyticForm,
    GridFunction,
};
use khabi::ProblemParams;

fn main() -> Result<(), khabi::Error> {
    let params = ProblemParams::new(2, 2.0)?;
    let rho = params.rho();

    let s0 = GridFunction::s0(&params);
    let v = check_inc_rho(&s0, &params)?;
    println!(
        "s_0: admissible = {}, worst growth margin = {:.3e} (saturates the inequality)",
        v.admissible, v.worst_growth_margin
    );
    println!("J(s_0) = {:.12} = P_n/(2 rho) = {:.12}", j_functional(&s0, &params)?, p_n(&params) / (2.0 * rho));

    let inflated = match s0.form() {
        Some(AnalyticForm::Power { coef, expo }) => GridFunction::power(1.1 * coef, *expo),
        _ => unreachable!(),
    };
    let v = check_inc_rho(&inflated, &params)?;
    println!(
        "1.1 s_0: admissible = {}, worst growth margin = {:.3e}",
        v.admissible, v.worst_growth_margin
    );

    let eps = 0.1;
    let gain = perturbation_gain(&s0, &params, eps)?;
    let s1 = iterate_with_epsilons(&params, vec![eps])?;
    let j1 = j_functional(&s1, &params)?;
    let j0 = p_n(&params) / (2.0 * rho);
    println!("perturbation gain at eps = {eps}: {gain:.10e}");
    println!(
        "J(s_1) - J(s_0) by independent quadrature: {:.10e} (relative agreement {:.2e})",
        j1 - j0,
        ((j1 - j0) - gain).abs() / gain
    );
    println!("every admissible candidate leaves a positive gain: the supremum is not attained");
    Ok(())
}

//! Isolate the positive zeros of `psi_rho` and print the sign decomposition
//! for a few dimensions.
//!
//! ```sh
//! cargo run --release --example psi_sign_pattern
//! ```

use khabi::deriv::build_stack;
use khabi::sign::{descartes_bound, positive_roots, sign_pattern};
use khabi::ProblemParams;

fn main() -> Result<(), khabi::Error> {
    for (n, rho) in [(2u32, 2.0f64), (2, 3.0), (3, 2.0), (4, 2.0), (5, 4.0), (6, 3.0)] {
        let params = ProblemParams::new(n, rho)?;
        let stack = build_stack(&params)?;
        let roots = positive_roots(&stack)?;
        let pattern = sign_pattern(&stack, &roots)?;
        println!("n = {n}, rho = {rho}:");
        for (i, z) in pattern.zeros.iter().enumerate() {
            println!(
                "  tau_{} = {:.15} (x = {:.15}{})",
                i + 1,
                z.tau,
                z.x,
                if z.even_multiplicity { ", tangential" } else { "" }
            );
        }
        let dm: Vec<String> = pattern
            .d_minus()
            .iter()
            .map(|(a, b)| format!("({a:.6}, {b:.6})"))
            .collect();
        println!("  I = {:?}, D_- = {}", pattern.index_set(), dm.join(" u "));
        println!(
            "  census: {} zeros vs Descartes bound {}",
            pattern.zeros.len(),
            descartes_bound(&stack)
        );
    }
    Ok(())
}

//! Run the maximizing sequence for (n, rho) = (2, 2) and watch `J(s_k)`
//! climb towards `J(rho)`.
//!
//! The damping budget is finite here: once the total damping reaches the
//! level where the iterates would stop being nondecreasing, the backtracking
//! drives `eps_k` to zero and the functional value freezes (see the notes in
//! the repository README).
//!
//! ```sh
//! cargo run --release --example maximize_convergence
//! ```

use khabi::functional::{maximize, MaximizeOptions};
use khabi::ProblemParams;

fn main() -> Result<(), khabi::Error> {
    let params = ProblemParams::new(2, 2.0)?;
    let opts = MaximizeOptions {
        iterations: 60,
        ..Default::default()
    };
    let run = maximize(&params, &opts)?;
    println!("J(rho) = {:.12}", run.j_sup);
    println!("{:>4} {:>12} {:>16} {:>12} {:>10}", "k", "eps_k", "J(s_k)", "gap", "gap/J");
    for row in run.rows.iter().step_by(5) {
        println!(
            "{:>4} {:>12.6e} {:>16.12} {:>12.6e} {:>10.4e}",
            row.k,
            row.epsilon,
            row.j_value,
            row.gap,
            row.gap / run.j_sup
        );
    }
    println!(
        "captured {:.2}% of the deficiency in {} iterations",
        100.0 * (1.0 - run.rows.last().unwrap().gap / run.rows[0].gap),
        run.rows.len() - 1
    );
    Ok(())
}

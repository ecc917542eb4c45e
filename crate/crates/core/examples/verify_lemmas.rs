//! Exhaustive exact check of the deadline-counting inequalities used by the
//! MMS rule.
//!
//! `cargo run --release --example verify_lemmas`

use fairdiv::cli::cmd_verify_lemmas;

fn main() -> fairdiv::Result<()> {
    let report = cmd_verify_lemmas(50, 5000)?;
    for check in &report.checks {
        match &check.counterexample {
            None => println!("{:<22} holds on {} cases", check.name, check.checked),
            Some(c) => println!(
                "{:<22} fails at n={} d={}: {} > {}",
                check.name, c.n, c.d, c.lhs, c.rhs
            ),
        }
    }
    Ok(())
}

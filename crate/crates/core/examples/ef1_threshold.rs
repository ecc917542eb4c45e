//! How much ranking information EF1 needs, and what happens with less.
//!
//! `cargo run --example ef1_threshold`

use fairdiv::fairness::necessary_ef1;
use fairdiv::model::{all_allocations, Instance};
use fairdiv::rules::{ef1_rule, ef1_threshold};

fn main() -> fairdiv::Result<()> {
    println!("{:>2} {:>2} {:>9}", "n", "m", "threshold");
    for n in 2..=4 {
        for m in [n, n + 1, n + 2, 2 * n + 1] {
            println!("{n:>2} {m:>2} {:>9}", ef1_threshold(n, m));
        }
    }

    let (n, m) = (3, 8);
    let k = ef1_threshold(n, m);
    let inst = Instance::identical(n, m, k)?;
    let a = ef1_rule(&inst)?;
    println!(
        "\nn={n} m={m} k={k}: {a}  necessarily EF1: {}",
        necessary_ef1(&a, &inst)?
    );

    // one fewer ranked good and no allocation survives every consistent valuation
    let short = Instance::identical(n, m, k - 1)?;
    let survivors = all_allocations(n, m)
        .filter(|a| necessary_ef1(a, &short).unwrap_or(false))
        .count();
    println!(
        "k={}: {survivors} of {} allocations are necessarily EF1",
        k - 1,
        3usize.pow(m as u32)
    );
    Ok(())
}

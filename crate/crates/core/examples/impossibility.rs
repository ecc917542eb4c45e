//! Small instances where no allocation can be fair for every consistent
//! valuation, with the defeating valuation for each allocation.
//!
//! `cargo run --example impossibility`

use fairdiv::model::{all_allocations, format_rational};
use fairdiv::welfare::gen_impossibility_fixtures;

fn main() -> fairdiv::Result<()> {
    for fixture in gen_impossibility_fixtures()? {
        let inst = &fixture.instance;
        println!(
            "{} on n={} m={} k={}",
            fixture.tag,
            inst.n(),
            inst.m(),
            inst.k()
        );
        for a in all_allocations(inst.n(), inst.m()).take(3) {
            match fixture.adversarial(&a)? {
                Some(v) => {
                    let rows: Vec<Vec<String>> = v
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(format_rational).collect())
                        .collect();
                    println!("  {a} defeated by {rows:?}");
                }
                None => println!("  {a} fails without a witness"),
            }
        }
    }
    Ok(())
}

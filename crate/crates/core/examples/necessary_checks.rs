//! Fairness that must hold for every valuation consistent with the
//! rankings, versus fairness under one sampled valuation.
//!
//! `cargo run --example necessary_checks`

use fairdiv::fairness::{is_ef1, necessary_dominates, necessary_ef1, necessary_efx, necessary_eq1};
use fairdiv::model::{Allocation, Instance};
use fairdiv::polytope::sample_consistent_profile;

fn main() -> fairdiv::Result<()> {
    // top-2 of 5 goods: {0} beats {3} for sure, {0} vs {3, 4} and {2} vs {3} are unknown
    let ranking = [0, 1];
    println!(
        "{{0}} >= {{3}}:   {}",
        necessary_dominates(&ranking, 5, &[0], &[3])?
    );
    println!(
        "{{0}} >= {{3,4}}: {}",
        necessary_dominates(&ranking, 5, &[0], &[3, 4])?
    );
    println!(
        "{{2}} >= {{3}}:   {}",
        necessary_dominates(&ranking, 5, &[2], &[3])?
    );

    let inst = Instance::new(2, 4, 2, vec![vec![0, 1], vec![1, 0]])?;
    for bundles in [vec![vec![0, 2], vec![1, 3]], vec![vec![0, 1], vec![2, 3]]] {
        let a = Allocation::new(bundles, 4)?;
        let v = sample_consistent_profile(&inst, 9)?;
        println!(
            "{a}: EF1 under a sample {}, necessarily EF1 {}, EFX {}, EQ1 {}",
            is_ef1(&a, &v)?,
            necessary_ef1(&a, &inst)?,
            necessary_efx(&a, &inst)?,
            necessary_eq1(&a, &inst)?
        );
    }
    Ok(())
}

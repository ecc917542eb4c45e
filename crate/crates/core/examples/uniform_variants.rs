//! Randomizing over agent labels: exact expected welfare of uniform
//! picking-sequence rules.
//!
//! `cargo run --example uniform_variants`

use fairdiv::model::{format_rational, Instance};
use fairdiv::polytope::sample_consistent_profile;
use fairdiv::rules::{Rule, RuleId};
use fairdiv::welfare::{expected_sw, optimal_sw};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fairdiv::Result<()> {
    let (n, m) = (4, 8);
    let inst = Instance::random(n, m, m, &mut ChaCha8Rng::seed_from_u64(1))?;
    let v = sample_consistent_profile(&inst, 1)?;
    println!("optimal welfare {}", format_rational(&optimal_sw(&v)));
    for rule in [RuleId::RoundRobin, RuleId::Mms, RuleId::Ef1] {
        let deterministic = Rule::Deterministic(rule).run(&inst)?;
        let uniform = Rule::Uniform(rule).run(&inst)?;
        println!(
            "{rule:<12} deterministic {:<12} uniform {}",
            format_rational(&expected_sw(&deterministic, &v)?),
            format_rational(&expected_sw(&uniform, &v)?)
        );
    }
    Ok(())
}

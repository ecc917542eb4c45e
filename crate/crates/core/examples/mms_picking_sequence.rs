//! The deadline-driven picking sequence behind the MMS rule, and its
//! guarantee checked against the exact maximin share.
//!
//! `cargo run --example mms_picking_sequence`

use fairdiv::fairness::{mms_value, MmsCap};
use fairdiv::model::{format_rational, Instance};
use fairdiv::polytope::sample_consistent_profile;
use fairdiv::rules::{edf_schedule, mms_deadline_pairs, mms_guarantee, mms_rule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fairdiv::Result<()> {
    let (n, m, k) = (3, 10, 6);
    let pairs = mms_deadline_pairs(n, m)?;
    for p in pairs.pairs() {
        print!("({}, {}) ", p.agent, p.deadline);
    }
    println!();
    let seq = edf_schedule(&pairs, m)?;
    println!("EDF sequence: {:?}", seq.picks());

    let inst = Instance::random(n, m, k, &mut ChaCha8Rng::seed_from_u64(3))?;
    let v = sample_consistent_profile(&inst, 3)?;
    let a = mms_rule(&inst)?;
    let alpha = mms_guarantee(n, m, k)?;
    println!("allocation {a}, alpha = {}", format_rational(&alpha));
    for i in 0..n {
        let mms = mms_value(i, &v, n, MmsCap::default())?;
        let got = v.bundle_value(i, a.bundle(i));
        println!(
            "agent {i}: value {} >= {} = alpha * MMS ({})",
            format_rational(&got),
            format_rational(&(&alpha * &mms)),
            format_rational(&mms)
        );
    }
    Ok(())
}

//! Rules that keep agent 0's worst-case value bounded away from zero, which
//! caps their distortion.
//!
//! `cargo run --example low_distortion_rules`

use fairdiv::model::{format_rational, Instance};
use fairdiv::polytope::ConsistentPolytope;
use fairdiv::rules::{ef1_low_distortion_rule, mms_rule, mms_rule_low_distortion};
use fairdiv::rules::{Rule, RuleId};
use fairdiv::welfare::{empirical_distortion, SearchMode};

fn main() -> fairdiv::Result<()> {
    let (n, m, k) = (3, 12, 9);
    let inst = Instance::identical(n, m, k)?;
    let polytope = ConsistentPolytope::for_agent(&inst, 0);
    for (name, a) in [
        ("mms", mms_rule(&inst)?),
        ("mms-low-distortion", mms_rule_low_distortion(&inst)?),
        ("ef1-low-distortion", ef1_low_distortion_rule(&inst)?),
    ] {
        let (lo, hi) = polytope.bundle_value_bounds(a.bundle(0))?;
        println!(
            "{name:<20} agent 0 gets {:?}, value in [{}, {}]",
            a.bundle(0),
            format_rational(&lo),
            format_rational(&hi)
        );
    }

    let small = Instance::identical(2, 5, 2)?;
    for rule in [RuleId::Mms, RuleId::MmsLowDistortion] {
        let report = empirical_distortion(
            Rule::Deterministic(rule),
            &small,
            SearchMode::ExhaustiveVertices,
            0,
        )?;
        println!(
            "{rule}: worst ratio over vertex profiles = {}",
            report.worst_ratio
        );
    }
    Ok(())
}

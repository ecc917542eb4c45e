//! Adversarial families: every rule on them leaves a large welfare gap.
//!
//! `cargo run --example lower_bounds`

use fairdiv::model::format_rational;
use fairdiv::rules::{ef1_rule, uniformize, RuleId};
use fairdiv::welfare::{gen_mms_upper, gen_thm1, gen_thm2, optimal_sw, social_welfare};

fn main() -> fairdiv::Result<()> {
    // identical complete rankings over x^n goods: some type assignment
    // leaves the uniform round robin far from optimal
    let family = gen_thm1(3, 2, 1_000)?;
    let support = uniformize(RuleId::RoundRobin, &family.instance)?.support(6)?;
    let (tau, sw) = family.worst_assignment(&support)?;
    let v = family.profile(&tau)?;
    println!(
        "x^n family: types {tau:?}, expected welfare {} vs optimum {} (block allocation reaches {})",
        format_rational(&sw),
        format_rational(&optimal_sw(&v)),
        format_rational(&family.welfare_floor())
    );

    let family = gen_thm2(6)?;
    let a = ef1_rule(&family.instance)?;
    let (v, alt) = family.adversarial(&a)?;
    println!(
        "EF1 family n=6: rule welfare {}, alternative {}",
        format_rational(&social_welfare(&a, &v)?),
        format_rational(&social_welfare(&alt, &v)?)
    );

    let family = gen_mms_upper(3, 9, 4)?;
    match family.cap()? {
        Some(cap) => println!("MMS cap for n=3 m=9 k=4: {}", format_rational(&cap)),
        None => println!("MMS cap is vacuous here"),
    }
    Ok(())
}

//! Ordinal allocation rules built on picking sequences.
//!
//! Every rule here only ever asks an agent to pick while at least one of
//! their ranked goods is still available, so top-k rankings suffice. Goods
//! left over after the sequence are handed out by an explicit
//! [`LeftoverPolicy`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::{
    harmonic, int, rat, Allocation, Instance, PickingSequence, RandomizedAllocation, Rational,
};

/// How goods that remain after the picking sequence are distributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeftoverPolicy {
    /// Remaining goods (ascending) to agents 0, 1, ... one each.
    OneEachAscending,
    AllToAgent(usize),
    /// Continues the cycle by position: the good handed out at overall
    /// position `p` (0-based) goes to agent `p mod n`.
    RoundRobinPad,
}

/// Runs `seq`, each picker taking their highest-ranked remaining good, then
/// distributes the rest according to `leftovers`.
pub fn run_picking_sequence(
    inst: &Instance,
    seq: &PickingSequence,
    leftovers: LeftoverPolicy,
) -> Result<Allocation> {
    let (n, m) = (inst.n(), inst.m());
    seq.validate(n, m)?;
    if let LeftoverPolicy::AllToAgent(agent) = leftovers {
        if agent >= n {
            return Err(Error::AgentOutOfRange { agent, n });
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for (pick, &agent) in seq.picks().iter().enumerate() {
        let good = inst
            .ranking(agent)
            .iter()
            .copied()
            .find(|&g| owner[g].is_none())
            .ok_or(Error::PickWithoutRankedGood { pick, agent })?;
        owner[good] = Some(agent);
    }
    let remaining: Vec<usize> = (0..m).filter(|&g| owner[g].is_none()).collect();
    match leftovers {
        LeftoverPolicy::OneEachAscending => {
            if remaining.len() > n {
                return Err(Error::TooManyLeftovers {
                    leftovers: remaining.len(),
                    n,
                });
            }
            for (agent, &good) in remaining.iter().enumerate() {
                owner[good] = Some(agent);
            }
        }
        LeftoverPolicy::AllToAgent(agent) => {
            for &good in &remaining {
                owner[good] = Some(agent);
            }
        }
        LeftoverPolicy::RoundRobinPad => {
            for (offset, &good) in remaining.iter().enumerate() {
                owner[good] = Some((seq.len() + offset) % n);
            }
        }
    }
    let owners: Vec<usize> = owner
        .into_iter()
        .map(|o| o.expect("every good assigned"))
        .collect();
    Allocation::from_owners(&owners, n)
}

fn cyclic(n: usize, len: usize) -> PickingSequence {
    PickingSequence::new((0..len).map(|p| p % n).collect())
}

/// Round robin for `min(k, m)` steps; any remaining goods continue the cycle.
pub fn round_robin_rule(inst: &Instance) -> Result<Allocation> {
    let seq = cyclic(inst.n(), inst.k().min(inst.m()));
    run_picking_sequence(inst, &seq, LeftoverPolicy::RoundRobinPad)
}

/// Smallest ranking length for which EF1 can be guaranteed with `n` agents
/// and `m` goods. A single agent needs no information at all.
pub fn ef1_threshold(n: usize, m: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    match m % n {
        0 => m.saturating_sub(n),
        1 => m.saturating_sub(2),
        r => m - r,
    }
}

/// Truncated round robin followed by a leftover assignment that only
/// permutes the goods of the last round.
pub fn ef1_rule(inst: &Instance) -> Result<Allocation> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    let threshold = ef1_threshold(n, m);
    if k < threshold {
        return Err(Error::KBelowThreshold { k, threshold });
    }
    if n == 1 {
        return run_picking_sequence(
            inst,
            &PickingSequence::default(),
            LeftoverPolicy::AllToAgent(0),
        );
    }
    let (steps, leftovers) = match m % n {
        0 => (m.saturating_sub(n), LeftoverPolicy::OneEachAscending),
        1 if m == 1 => (0, LeftoverPolicy::AllToAgent(0)),
        1 => (m - 2, LeftoverPolicy::AllToAgent(n - 1)),
        r => (m - r, LeftoverPolicy::OneEachAscending),
    };
    run_picking_sequence(inst, &cyclic(n, steps), leftovers)
}

/// EF1 rule that always guarantees agent 0 a value of at least `1/(3n)`.
pub fn ef1_low_distortion_rule(inst: &Instance) -> Result<Allocation> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    if k == 0 {
        return Err(Error::KZero);
    }
    if m > n {
        // agent 0 already opens the round-robin portion of the EF1 rule
        return ef1_rule(inst);
    }
    let favourite = inst.ranking(0)[0];
    let mut owners = vec![0; m];
    let rest = (0..m).filter(|&g| g != favourite);
    for (agent, good) in (1..n).zip(rest) {
        owners[good] = agent;
    }
    Allocation::from_owners(&owners, n)
}

/// An `(agent, deadline)` pair: the agent's next appearance must occur at or
/// before 1-based position `deadline` of the picking sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeadlinePair {
    pub agent: usize,
    pub deadline: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeadlinePairSet {
    n: usize,
    pairs: Vec<DeadlinePair>,
}

impl DeadlinePairSet {
    pub fn new(n: usize, pairs: Vec<DeadlinePair>) -> Result<Self> {
        for p in &pairs {
            if p.agent >= n {
                return Err(Error::AgentOutOfRange { agent: p.agent, n });
            }
            if p.deadline == 0 {
                return Err(Error::ZeroDeadline);
            }
        }
        Ok(Self { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[DeadlinePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn count_due_by(&self, d: usize) -> usize {
        self.pairs.iter().filter(|p| p.deadline <= d).count()
    }

    fn sorted(&self) -> Vec<DeadlinePair> {
        let mut sorted = self.pairs.clone();
        sorted.sort_by_key(|p| (p.deadline, p.agent));
        sorted
    }

    /// Smallest `d` with more than `d` deadlines at or before `d`, if any.
    pub fn first_overload(&self) -> Option<usize> {
        self.sorted()
            .iter()
            .enumerate()
            .find(|(idx, p)| idx + 1 > p.deadline)
            .map(|(_, p)| p.deadline)
    }
}

fn floor_nonneg(r: &Rational) -> usize {
    r.numer()
        .div_floor(r.denom())
        .to_usize()
        .expect("non-negative floor fits usize")
}

/// `2 H_n (n - i + 1)` for the 1-based agent index `i`.
fn spacing(h_n: &Rational, n: usize, i: usize) -> Rational {
    h_n * int(2 * (n - i + 1) as i64)
}

/// The deadline pairs `(i, i + floor(j * 2H_n (n-i+1)))` for every agent `i`
/// and `0 <= j <= floor((m-i) / (2H_n (n-i+1)))`, evaluated exactly.
pub fn mms_deadline_pairs(n: usize, m: usize) -> Result<DeadlinePairSet> {
    if n == 0 || m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    let h_n = harmonic(n)?;
    let mut pairs = Vec::new();
    for i in 1..=n {
        let c = spacing(&h_n, n, i);
        let j_max = floor_nonneg(&(int((m - i) as i64) / &c));
        for j in 0..=j_max {
            let offset = floor_nonneg(&(int(j as i64) * &c));
            pairs.push(DeadlinePair {
                agent: i - 1,
                deadline: i + offset,
            });
        }
    }
    DeadlinePairSet::new(n, pairs)
}

/// [`mms_deadline_pairs`] plus `(0, 2nj + 1)` for every `j >= 1` with
/// `2nj + 1 <= m`, so agent 0 picks at least once per `2n` positions.
pub fn low_distortion_deadline_pairs(n: usize, m: usize) -> Result<DeadlinePairSet> {
    let mut set = mms_deadline_pairs(n, m)?;
    set.pairs.extend(
        (1..)
            .map(|j| 2 * n * j + 1)
            .take_while(|&d| d <= m)
            .map(|deadline| DeadlinePair { agent: 0, deadline }),
    );
    Ok(set)
}

/// Earliest-deadline-first order of the pair agents (ties by agent id),
/// padded to `length` positions by the position-aligned cycle `p mod n`.
pub fn edf_schedule(pairs: &DeadlinePairSet, length: usize) -> Result<PickingSequence> {
    if let Some(d) = pairs.first_overload() {
        return Err(Error::InfeasibleDeadlines(d));
    }
    let mut picks: Vec<usize> = pairs.sorted().into_iter().map(|p| p.agent).collect();
    if picks.len() > length {
        return Err(Error::ScheduleTooShort {
            needed: picks.len(),
            length,
        });
    }
    let n = pairs.n();
    picks.extend((picks.len()..length).map(|p| p % n));
    Ok(PickingSequence::new(picks))
}

/// Whether each agent's r-th appearance is no later than their r-th smallest deadline.
pub fn verify_deadlines(seq: &PickingSequence, pairs: &DeadlinePairSet) -> bool {
    let n = pairs.n();
    let mut deadlines = vec![Vec::new(); n];
    for p in pairs.pairs() {
        deadlines[p.agent].push(p.deadline);
    }
    let mut positions = vec![Vec::new(); n];
    for (idx, &agent) in seq.picks().iter().enumerate() {
        if agent < n {
            positions[agent].push(idx + 1);
        }
    }
    deadlines.iter_mut().zip(&positions).all(|(ds, ps)| {
        ds.sort_unstable();
        ds.iter()
            .enumerate()
            .all(|(r, &d)| ps.get(r).is_some_and(|&pos| pos <= d))
    })
}

fn check_mms_pre(inst: &Instance) -> Result<()> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    if m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    if k < n {
        return Err(Error::KBelowN { k, required: n });
    }
    Ok(())
}

/// The MMS guarantee `(k-n+1)/(m-n+1) * 1/(2 H_n)` of [`mms_rule`].
pub fn mms_guarantee(n: usize, m: usize, k: usize) -> Result<Rational> {
    if m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    if k < n {
        return Err(Error::KBelowN { k, required: n });
    }
    let fraction = rat((k - n + 1) as i64, (m - n + 1) as i64);
    Ok(fraction / (harmonic(n)? * int(2)))
}

/// The guarantee `1 / floor((m-n+2)/2)` of [`mms_rule_k_n_minus_1`].
pub fn mms_k_n_minus_1_guarantee(n: usize, m: usize) -> Result<Rational> {
    if m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    Ok(rat(1, ((m - n + 2) / 2) as i64))
}

/// The EDF picking sequence over the MMS deadline pairs, truncated to `k`
/// picks; leftovers continue the round-robin cycle.
pub fn mms_rule(inst: &Instance) -> Result<Allocation> {
    check_mms_pre(inst)?;
    let pairs = mms_deadline_pairs(inst.n(), inst.m())?;
    let mut seq = edf_schedule(&pairs, inst.m())?;
    seq.truncate(inst.k());
    run_picking_sequence(inst, &seq, LeftoverPolicy::RoundRobinPad)
}

/// Agents `0..n-1` pick once each, the last agent takes everything else.
pub fn mms_rule_k_n_minus_1(inst: &Instance) -> Result<Allocation> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    if m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    if k + 1 < n {
        return Err(Error::KBelowN { k, required: n - 1 });
    }
    let seq = PickingSequence::new((0..n - 1).collect());
    run_picking_sequence(inst, &seq, LeftoverPolicy::AllToAgent(n - 1))
}

/// [`mms_rule`] with extra agent-0 deadlines every `2n` positions and all
/// leftovers to agent 0, which keeps agent 0 above `1/(2n)`.
pub fn mms_rule_low_distortion(inst: &Instance) -> Result<Allocation> {
    check_mms_pre(inst)?;
    let pairs = low_distortion_deadline_pairs(inst.n(), inst.m())?;
    let mut seq = edf_schedule(&pairs, inst.m())?;
    seq.truncate(inst.k());
    run_picking_sequence(inst, &seq, LeftoverPolicy::AllToAgent(0))
}

/// Stable identifiers of the deterministic rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    RoundRobin,
    Ef1,
    Ef1LowDistortion,
    Mms,
    MmsKNMinus1,
    MmsLowDistortion,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::RoundRobin,
        RuleId::Ef1,
        RuleId::Ef1LowDistortion,
        RuleId::Mms,
        RuleId::MmsKNMinus1,
        RuleId::MmsLowDistortion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::RoundRobin => "round-robin",
            RuleId::Ef1 => "ef1",
            RuleId::Ef1LowDistortion => "ef1-low-distortion",
            RuleId::Mms => "mms",
            RuleId::MmsKNMinus1 => "mms-k-n-1",
            RuleId::MmsLowDistortion => "mms-low-distortion",
        }
    }

    pub fn apply(self, inst: &Instance) -> Result<Allocation> {
        match self {
            RuleId::RoundRobin => round_robin_rule(inst),
            RuleId::Ef1 => ef1_rule(inst),
            RuleId::Ef1LowDistortion => ef1_low_distortion_rule(inst),
            RuleId::Mms => mms_rule(inst),
            RuleId::MmsKNMinus1 => mms_rule_k_n_minus_1(inst),
            RuleId::MmsLowDistortion => mms_rule_low_distortion(inst),
        }
    }

    /// The α for which the rule is α-MMS on `inst`, where it has one.
    pub fn mms_guarantee(self, inst: &Instance) -> Option<Rational> {
        let (n, m, k) = (inst.n(), inst.m(), inst.k());
        match self {
            RuleId::Mms | RuleId::MmsLowDistortion => mms_guarantee(n, m, k).ok(),
            RuleId::MmsKNMinus1 if k + 1 >= n => mms_k_n_minus_1_guarantee(n, m).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownRule(s.to_string()))
    }
}

/// A deterministic rule or its uniform variant (`uniform:<rule>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Deterministic(RuleId),
    Uniform(RuleId),
}

impl Rule {
    pub fn base(self) -> RuleId {
        match self {
            Rule::Deterministic(r) | Rule::Uniform(r) => r,
        }
    }

    pub fn run(self, inst: &Instance) -> Result<RandomizedAllocation> {
        match self {
            Rule::Deterministic(r) => Ok(RandomizedAllocation::deterministic(r.apply(inst)?)),
            Rule::Uniform(r) => uniformize(r, inst),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Deterministic(r) => write!(f, "{r}"),
            Rule::Uniform(r) => write!(f, "uniform:{r}"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("uniform:") {
            Some(base) => Ok(Rule::Uniform(base.parse()?)),
            None => Ok(Rule::Deterministic(s.parse()?)),
        }
    }
}

/// Wraps a deterministic rule in a uniformly random agent relabeling.
/// The rule is run once on `inst` so that its errors surface here.
pub fn uniformize(rule: RuleId, inst: &Instance) -> Result<RandomizedAllocation> {
    rule.apply(inst)?;
    Ok(RandomizedAllocation::UniformPermutationMixture {
        rule,
        instance: inst.clone(),
    })
}

/// Default cap on `n` for expanding a permutation mixture (`n!` runs).
pub const DEFAULT_MAX_EXPANSION_N: usize = 6;

pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm
        .iter()
        .rposition(|&x| x > perm[i])
        .expect("pivot exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Runs `rule` with agent slot `j` played by agent `order[j]`, then maps the
/// bundles back to the original agents.
pub fn run_relabeled(rule: RuleId, inst: &Instance, order: &[usize]) -> Result<Allocation> {
    let relabeled = rule.apply(&inst.relabeled(order)?)?;
    let mut bundles = vec![Vec::new(); inst.n()];
    for (slot, &agent) in order.iter().enumerate() {
        bundles[agent] = relabeled.bundle(slot).to_vec();
    }
    Allocation::new(bundles, inst.m())
}

impl RandomizedAllocation {
    /// Explicit support with probabilities. A permutation mixture expands to
    /// one entry per relabeling, each with probability `1/n!`.
    pub fn support(&self, max_n: usize) -> Result<Vec<(Allocation, Rational)>> {
        match self {
            RandomizedAllocation::ExplicitMixture(support) => Ok(support.clone()),
            RandomizedAllocation::UniformPermutationMixture { rule, instance } => {
                let n = instance.n();
                if n > max_n {
                    return Err(Error::CapExceeded {
                        what: "agents for permutation expansion",
                        limit: max_n as u64,
                        found: n as u64,
                    });
                }
                let mut order: Vec<usize> = (0..n).collect();
                let mut allocations = Vec::new();
                loop {
                    allocations.push(run_relabeled(*rule, instance, &order)?);
                    if !next_permutation(&mut order) {
                        break;
                    }
                }
                let p = Rational::one() / int(allocations.len() as i64);
                Ok(allocations.into_iter().map(|a| (a, p.clone())).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alloc(bundles: Vec<Vec<usize>>, m: usize) -> Allocation {
        Allocation::new(bundles, m).unwrap()
    }

    fn pairs(n: usize, list: &[(usize, usize)]) -> DeadlinePairSet {
        // test inputs use 1-based agents, as in the formulas
        DeadlinePairSet::new(
            n,
            list.iter()
                .map(|&(agent, deadline)| DeadlinePair {
                    agent: agent - 1,
                    deadline,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn picking_sequence_traces() {
        let inst = Instance::identical(2, 4, 4).unwrap();
        let a = run_picking_sequence(
            &inst,
            &PickingSequence::new(vec![0, 1, 0, 1]),
            LeftoverPolicy::RoundRobinPad,
        )
        .unwrap();
        assert_eq!(a, alloc(vec![vec![0, 2], vec![1, 3]], 4));

        let inst = Instance::identical(2, 3, 3).unwrap();
        let a = run_picking_sequence(
            &inst,
            &PickingSequence::new(vec![0, 1]),
            LeftoverPolicy::AllToAgent(1),
        )
        .unwrap();
        assert_eq!(a, alloc(vec![vec![0], vec![1, 2]], 3));

        let inst = Instance::new(2, 2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let a = run_picking_sequence(
            &inst,
            &PickingSequence::new(vec![0, 1]),
            LeftoverPolicy::OneEachAscending,
        )
        .unwrap();
        assert_eq!(a, alloc(vec![vec![0], vec![1]], 2));
    }

    #[test]
    fn picking_sequence_errors() {
        let inst = Instance::identical(2, 3, 1).unwrap();
        assert_eq!(
            run_picking_sequence(
                &inst,
                &PickingSequence::new(vec![0, 1]),
                LeftoverPolicy::RoundRobinPad
            ),
            Err(Error::PickWithoutRankedGood { pick: 1, agent: 1 })
        );
        assert!(matches!(
            run_picking_sequence(
                &inst,
                &PickingSequence::new(vec![0, 1, 0, 1]),
                LeftoverPolicy::RoundRobinPad
            ),
            Err(Error::SequenceTooLong { .. })
        ));
        let inst = Instance::identical(2, 4, 0).unwrap();
        assert_eq!(
            run_picking_sequence(
                &inst,
                &PickingSequence::default(),
                LeftoverPolicy::OneEachAscending
            ),
            Err(Error::TooManyLeftovers { leftovers: 4, n: 2 })
        );
    }

    #[test]
    fn ef1_threshold_cases() {
        assert_eq!(ef1_threshold(3, 6), 3);
        assert_eq!(ef1_threshold(3, 7), 5);
        assert_eq!(ef1_threshold(3, 8), 6);
        assert_eq!(ef1_threshold(3, 5), 3);
        assert_eq!(ef1_threshold(2, 1), 0);
        assert_eq!(ef1_threshold(3, 0), 0);
        assert_eq!(ef1_threshold(3, 2), 0);
        assert_eq!(ef1_threshold(1, 9), 0);
    }

    #[test]
    fn ef1_rule_traces() {
        let inst = Instance::identical(2, 4, 4).unwrap();
        assert_eq!(
            ef1_rule(&inst).unwrap(),
            alloc(vec![vec![0, 2], vec![1, 3]], 4)
        );

        let inst = Instance::identical(3, 3, 0).unwrap();
        assert_eq!(
            ef1_rule(&inst).unwrap(),
            alloc(vec![vec![0], vec![1], vec![2]], 3)
        );

        let inst = Instance::identical(2, 5, 3).unwrap();
        assert_eq!(
            ef1_rule(&inst).unwrap(),
            alloc(vec![vec![0, 2], vec![1, 3, 4]], 5)
        );

        let inst = Instance::identical(3, 1, 0).unwrap();
        assert_eq!(
            ef1_rule(&inst).unwrap(),
            alloc(vec![vec![0], vec![], vec![]], 1)
        );

        let inst = Instance::identical(2, 4, 1).unwrap();
        assert_eq!(
            ef1_rule(&inst),
            Err(Error::KBelowThreshold { k: 1, threshold: 2 })
        );
    }

    #[test]
    fn deadline_pair_examples() {
        assert_eq!(
            mms_deadline_pairs(2, 4).unwrap(),
            pairs(2, &[(1, 1), (2, 2)])
        );
        assert_eq!(
            mms_deadline_pairs(1, 3).unwrap(),
            pairs(1, &[(1, 1), (1, 3)])
        );
        for n in 2..12 {
            let set = mms_deadline_pairs(n, n + 1).unwrap();
            assert_eq!(set.len(), n);
            assert!(set.pairs().iter().all(|p| p.deadline == p.agent + 1));
        }
        assert_eq!(
            mms_deadline_pairs(3, 3),
            Err(Error::MNotGreaterThanN { n: 3, m: 3 })
        );
    }

    #[test]
    fn edf_examples() {
        assert_eq!(
            edf_schedule(&pairs(2, &[(1, 1), (2, 2)]), 4)
                .unwrap()
                .into_inner(),
            vec![0, 1, 0, 1]
        );
        assert_eq!(
            edf_schedule(&pairs(2, &[(1, 1), (1, 3), (2, 2)]), 3)
                .unwrap()
                .into_inner(),
            vec![0, 1, 0]
        );
        assert_eq!(
            edf_schedule(&pairs(2, &[(1, 1), (2, 1)]), 5),
            Err(Error::InfeasibleDeadlines(1))
        );
        assert_eq!(
            edf_schedule(&pairs(2, &[(1, 1), (2, 2), (1, 3)]), 2),
            Err(Error::ScheduleTooShort {
                needed: 3,
                length: 2
            })
        );
    }

    #[test]
    fn verify_deadline_examples() {
        let p = pairs(2, &[(1, 1), (2, 2)]);
        assert!(verify_deadlines(
            &PickingSequence::new(vec![0, 1, 0, 1]),
            &p
        ));
        assert!(!verify_deadlines(&PickingSequence::new(vec![1, 0]), &p));
        assert!(verify_deadlines(
            &PickingSequence::new(vec![0, 1, 0]),
            &pairs(2, &[(1, 1), (1, 3), (2, 2)])
        ));
        // missing appearance
        assert!(!verify_deadlines(
            &PickingSequence::new(vec![0, 1]),
            &pairs(2, &[(1, 1), (1, 3), (2, 2)])
        ));
    }

    #[test]
    fn mms_rule_traces() {
        let inst = Instance::identical(2, 4, 4).unwrap();
        assert_eq!(
            mms_rule(&inst).unwrap(),
            alloc(vec![vec![0, 2], vec![1, 3]], 4)
        );
        assert_eq!(mms_guarantee(2, 4, 4).unwrap(), rat(1, 3));

        let inst = Instance::identical(2, 4, 2).unwrap();
        assert_eq!(
            mms_rule(&inst).unwrap(),
            alloc(vec![vec![0, 2], vec![1, 3]], 4)
        );
        assert_eq!(mms_guarantee(2, 4, 2).unwrap(), rat(1, 9));

        let inst = Instance::identical(1, 2, 1).unwrap();
        assert_eq!(mms_rule(&inst).unwrap(), alloc(vec![vec![0, 1]], 2));

        assert_eq!(
            mms_rule(&Instance::identical(3, 5, 2).unwrap()),
            Err(Error::KBelowN { k: 2, required: 3 })
        );
        assert_eq!(
            mms_rule(&Instance::identical(3, 3, 3).unwrap()),
            Err(Error::MNotGreaterThanN { n: 3, m: 3 })
        );
    }

    #[test]
    fn mms_k_n_minus_1_traces() {
        let inst = Instance::identical(3, 5, 2).unwrap();
        assert_eq!(
            mms_rule_k_n_minus_1(&inst).unwrap(),
            alloc(vec![vec![0], vec![1], vec![2, 3, 4]], 5)
        );
        assert_eq!(mms_k_n_minus_1_guarantee(3, 5).unwrap(), rat(1, 2));

        let inst = Instance::identical(2, 4, 1).unwrap();
        assert_eq!(
            mms_rule_k_n_minus_1(&inst).unwrap(),
            alloc(vec![vec![0], vec![1, 2, 3]], 4)
        );
        assert_eq!(mms_k_n_minus_1_guarantee(2, 4).unwrap(), rat(1, 2));

        let inst = Instance::new(2, 3, 1, vec![vec![2], vec![0]]).unwrap();
        assert_eq!(
            mms_rule_k_n_minus_1(&inst).unwrap(),
            alloc(vec![vec![2], vec![0, 1]], 3)
        );
    }

    #[test]
    fn low_distortion_pairs_and_rule() {
        let set = low_distortion_deadline_pairs(2, 6).unwrap();
        assert!(set.pairs().contains(&DeadlinePair {
            agent: 0,
            deadline: 5
        }));
        let seq = edf_schedule(&set, 6).unwrap();
        assert!(verify_deadlines(&seq, &set));
        assert_eq!(seq.picks()[0], 0);

        // no extra pair fits when m = 4
        assert_eq!(
            low_distortion_deadline_pairs(2, 4).unwrap(),
            mms_deadline_pairs(2, 4).unwrap()
        );
        let inst = Instance::identical(2, 4, 4).unwrap();
        assert_eq!(
            mms_rule_low_distortion(&inst).unwrap(),
            mms_rule(&inst).unwrap()
        );

        let set = low_distortion_deadline_pairs(3, 7).unwrap();
        assert!(set.pairs().contains(&DeadlinePair {
            agent: 0,
            deadline: 7
        }));
        assert!(verify_deadlines(&edf_schedule(&set, 7).unwrap(), &set));
    }

    #[test]
    fn ef1_low_distortion_traces() {
        let inst = Instance::new(3, 2, 1, vec![vec![1], vec![0], vec![0]]).unwrap();
        assert_eq!(
            ef1_low_distortion_rule(&inst).unwrap(),
            alloc(vec![vec![1], vec![0], vec![]], 2)
        );
        let inst = Instance::identical(2, 4, 4).unwrap();
        assert_eq!(
            ef1_low_distortion_rule(&inst).unwrap(),
            alloc(vec![vec![0, 2], vec![1, 3]], 4)
        );
        let inst = Instance::identical(2, 1, 1).unwrap();
        assert_eq!(
            ef1_low_distortion_rule(&inst).unwrap(),
            alloc(vec![vec![0], vec![]], 1)
        );
        assert_eq!(
            ef1_low_distortion_rule(&Instance::identical(2, 2, 0).unwrap()),
            Err(Error::KZero)
        );
    }

    #[test]
    fn uniformize_examples() {
        let inst = Instance::identical(2, 2, 2).unwrap();
        let support = uniformize(RuleId::Ef1, &inst).unwrap().support(6).unwrap();
        assert_eq!(
            support,
            vec![
                (alloc(vec![vec![0], vec![1]], 2), rat(1, 2)),
                (alloc(vec![vec![1], vec![0]], 2), rat(1, 2)),
            ]
        );

        let inst = Instance::identical(1, 3, 3).unwrap();
        let support = uniformize(RuleId::Ef1, &inst).unwrap().support(6).unwrap();
        assert_eq!(support, vec![(alloc(vec![vec![0, 1, 2]], 3), int(1))]);

        let inst = Instance::identical(2, 4, 1).unwrap();
        let support = uniformize(RuleId::MmsKNMinus1, &inst)
            .unwrap()
            .support(6)
            .unwrap();
        assert_eq!(
            support,
            vec![
                (alloc(vec![vec![0], vec![1, 2, 3]], 4), rat(1, 2)),
                (alloc(vec![vec![1, 2, 3], vec![0]], 4), rat(1, 2)),
            ]
        );

        let inst = Instance::identical(7, 8, 8).unwrap();
        assert!(matches!(
            uniformize(RuleId::Mms, &inst).unwrap().support(6),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(
            uniformize(RuleId::Mms, &Instance::identical(2, 2, 2).unwrap()),
            Err(Error::MNotGreaterThanN { n: 2, m: 2 })
        );
    }

    #[test]
    fn rule_ids_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.as_str().parse::<RuleId>().unwrap(), r);
            let u = Rule::Uniform(r);
            assert_eq!(u.to_string().parse::<Rule>().unwrap(), u);
        }
        assert!("uniform:nope".parse::<Rule>().is_err());
    }

    #[test]
    fn permutations_are_exhaustive() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }
}

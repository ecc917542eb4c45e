//! Core domain types: instances with top-k rankings, exact valuation
//! profiles, allocations and picking sequences.
//!
//! Agents and goods are 0-indexed throughout. A ranking lists an agent's
//! `k` most valuable goods, best first; goods not in the list are
//! "unranked" for that agent.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::RuleId;

/// Exact arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Lossless `num/den` rendering used in every machine-readable output.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Floating-point view for human-readable tables only.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The n-th harmonic number `1 + 1/2 + ... + 1/n`, exactly.
pub fn harmonic(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    Ok((1..=n).fold(Rational::zero(), |acc, j| acc + rat(1, j as i64)))
}

/// Checks every structural invariant of an instance.
pub fn validate_instance(n: usize, m: usize, k: usize, rankings: &[Vec<usize>]) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroAgents);
    }
    if k > m {
        return Err(Error::KTooLarge { k, m });
    }
    if rankings.len() != n {
        return Err(Error::AgentCountMismatch {
            expected: n,
            found: rankings.len(),
        });
    }
    for (agent, ranking) in rankings.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &good in ranking {
            if good >= m {
                return Err(Error::GoodIdOutOfRange { agent, good, m });
            }
            if !seen.insert(good) {
                return Err(Error::DuplicateGoodInRanking { agent, good });
            }
        }
        if ranking.len() != k {
            return Err(Error::RankingLengthMismatch {
                agent,
                expected: k,
                found: ranking.len(),
            });
        }
    }
    Ok(())
}

/// `n` agents, `m` goods and one top-`k` ranking per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    n: usize,
    m: usize,
    k: usize,
    rankings: Vec<Vec<usize>>,
}

impl Instance {
    pub fn new(n: usize, m: usize, k: usize, rankings: Vec<Vec<usize>>) -> Result<Self> {
        validate_instance(n, m, k, &rankings)?;
        Ok(Self { n, m, k, rankings })
    }

    /// Every agent ranks goods `0..k` in ascending order.
    pub fn identical(n: usize, m: usize, k: usize) -> Result<Self> {
        Self::new(n, m, k, vec![(0..k).collect(); n])
    }

    /// Independent uniformly random top-k rankings.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> Result<Self> {
        let rankings = (0..n)
            .map(|_| {
                let mut goods: Vec<usize> = (0..m).collect();
                goods.shuffle(rng);
                goods.truncate(k);
                goods
            })
            .collect();
        Self::new(n, m, k, rankings)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    pub fn ranking(&self, agent: usize) -> &[usize] {
        &self.rankings[agent]
    }

    pub fn is_complete(&self) -> bool {
        self.k == self.m
    }

    /// Relabels agents: agent slot `j` of the result reports the ranking of
    /// agent `order[j]` of `self`.
    pub fn relabeled(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "relabeling of length {} for {} agents",
                order.len(),
                self.n
            )));
        }
        let rankings = order.iter().map(|&a| self.rankings[a].clone()).collect();
        Self::new(self.n, self.m, self.k, rankings)
    }

    /// The set of ranked goods if all agents rank the same set.
    pub fn common_top_set(&self) -> Option<BTreeSet<usize>> {
        let first: BTreeSet<usize> = self.rankings[0].iter().copied().collect();
        self.rankings[1..]
            .iter()
            .all(|r| r.iter().copied().collect::<BTreeSet<_>>() == first)
            .then_some(first)
    }
}

/// Additive, unit-sum valuations: `values[i][g]` is agent `i`'s value for good `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationProfile {
    values: Vec<Vec<Rational>>,
}

impl ValuationProfile {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let m = values.first().map_or(0, Vec::len);
        for (agent, row) in values.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "agent {agent} has {} values, agent 0 has {m}",
                    row.len()
                )));
            }
            if let Some(good) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::NegativeValue { agent, good });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::NotUnitSum {
                    agent,
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn m(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.values[agent]
    }

    pub fn value(&self, agent: usize, good: usize) -> &Rational {
        &self.values[agent][good]
    }

    pub fn bundle_value(&self, agent: usize, bundle: &[usize]) -> Rational {
        bundle.iter().map(|&g| &self.values[agent][g]).sum()
    }

    pub(crate) fn check_dims(&self, n: usize, m: usize) -> Result<()> {
        if self.n() != n || self.m() != m {
            return Err(Error::DimensionMismatch(format!(
                "valuations are {}x{}, expected {n}x{m}",
                self.n(),
                self.m()
            )));
        }
        Ok(())
    }
}

/// A complete partition of the goods into `n` bundles (bundles may be empty).
/// Each bundle is kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    pub fn new(mut bundles: Vec<Vec<usize>>, m: usize) -> Result<Self> {
        let mut owned = vec![false; m];
        for bundle in &bundles {
            for &good in bundle {
                if good >= m {
                    return Err(Error::GoodOutOfRange { good, m });
                }
                if std::mem::replace(&mut owned[good], true) {
                    return Err(Error::GoodAssignedTwice { good });
                }
            }
        }
        if let Some(good) = owned.iter().position(|&o| !o) {
            return Err(Error::GoodUnassigned { good });
        }
        for bundle in &mut bundles {
            bundle.sort_unstable();
        }
        Ok(Self { bundles })
    }

    /// Builds the allocation where good `g` goes to agent `owners[g]`.
    pub fn from_owners(owners: &[usize], n: usize) -> Result<Self> {
        let mut bundles = vec![Vec::new(); n];
        for (good, &agent) in owners.iter().enumerate() {
            if agent >= n {
                return Err(Error::AgentOutOfRange { agent, n });
            }
            bundles[agent].push(good);
        }
        Ok(Self { bundles })
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn owner_of(&self, good: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(&good))
    }

    pub(crate) fn check_dims(&self, n: usize, m: usize) -> Result<()> {
        if self.n() != n || self.m() != m {
            return Err(Error::DimensionMismatch(format!(
                "allocation has {} bundles over {} goods, expected {n} over {m}",
                self.n(),
                self.m()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bundles
            .iter()
            .map(|b| {
                let goods: Vec<String> = b.iter().map(ToString::to_string).collect();
                format!("{{{}}}", goods.join(","))
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All `n^m` allocations of `m` goods to `n` agents, in lexicographic order
/// of the owner vector.
pub fn all_allocations(n: usize, m: usize) -> impl Iterator<Item = Allocation> {
    let total = (n as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut owners = vec![0; m];
        for slot in owners.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        Allocation::from_owners(&owners, n).expect("owners are in range")
    })
}

/// A distribution over allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RandomizedAllocation {
    /// Finitely supported lottery; probabilities sum to exactly one.
    ExplicitMixture(Vec<(Allocation, Rational)>),
    /// The deterministic rule run under a uniformly random agent relabeling.
    UniformPermutationMixture { rule: RuleId, instance: Instance },
}

impl RandomizedAllocation {
    pub fn explicit(support: Vec<(Allocation, Rational)>) -> Result<Self> {
        let total: Rational = support.iter().map(|(_, p)| p).sum();
        if support.iter().any(|(_, p)| p.is_negative()) || !total.is_one() {
            return Err(Error::BadProbabilities(format_rational(&total)));
        }
        Ok(Self::ExplicitMixture(support))
    }

    pub fn deterministic(allocation: Allocation) -> Self {
        Self::ExplicitMixture(vec![(allocation, Rational::one())])
    }
}

/// An ordered list of agents; each takes their favourite remaining good.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PickingSequence(Vec<usize>);

impl PickingSequence {
    pub fn new(picks: Vec<usize>) -> Self {
        Self(picks)
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.0.len() > m {
            return Err(Error::SequenceTooLong {
                len: self.0.len(),
                m,
            });
        }
        if let Some(&agent) = self.0.iter().find(|&&a| a >= n) {
            return Err(Error::AgentOutOfRange { agent, n });
        }
        Ok(())
    }

    pub fn picks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Whether a single valuation row is consistent with a ranking: non-increasing
/// along the ranking, and every ranked good worth at least every unranked good.
pub fn row_is_consistent(row: &[Rational], ranking: &[usize]) -> bool {
    if ranking.windows(2).any(|w| row[w[0]] < row[w[1]]) {
        return false;
    }
    let Some(&last) = ranking.last() else {
        return true;
    };
    let ranked: BTreeSet<usize> = ranking.iter().copied().collect();
    (0..row.len())
        .filter(|g| !ranked.contains(g))
        .all(|g| row[g] <= row[last])
}

pub fn is_consistent(v: &ValuationProfile, inst: &Instance) -> Result<bool> {
    v.check_dims(inst.n(), inst.m())?;
    Ok((0..inst.n()).all(|i| row_is_consistent(v.row(i), inst.ranking(i))))
}

/// The `k` most valuable goods of a row, best first; ties go to the lower id.
pub fn top_k_of(row: &[Rational], k: usize) -> Result<Vec<usize>> {
    if k > row.len() {
        return Err(Error::KTooLarge { k, m: row.len() });
    }
    let mut goods: Vec<usize> = (0..row.len()).collect();
    goods.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    goods.truncate(k);
    Ok(goods)
}

/// Top-k rankings induced by a valuation profile.
pub fn instance_from_valuations(v: &ValuationProfile, k: usize) -> Result<Instance> {
    let rankings = v
        .rows()
        .iter()
        .map(|row| top_k_of(row, k))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(v.n(), v.m(), k, rankings)
}

/// On-disk instance format. Valuations, when present, are `[num, den]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rankings: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<Vec<[i64; 2]>>>,
    /// Seed of the generator that produced the file, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_parts(inst: &Instance, valuations: Option<&ValuationProfile>) -> Result<Self> {
        let valuations = valuations
            .map(|v| {
                v.rows()
                    .iter()
                    .map(|row| row.iter().map(rational_pair).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Ok(Self {
            n: inst.n(),
            m: inst.m(),
            k: inst.k(),
            rankings: inst.rankings().to_vec(),
            valuations,
            seed: None,
        })
    }

    /// Validates the instance and, when present, that the valuations are
    /// unit-sum and consistent with the rankings.
    pub fn into_parts(self) -> Result<(Instance, Option<ValuationProfile>)> {
        let inst = Instance::new(self.n, self.m, self.k, self.rankings)?;
        let Some(rows) = self.valuations else {
            return Ok((inst, None));
        };
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[num, den]| {
                        if den == 0 {
                            Err(Error::Parse("zero denominator in valuation".into()))
                        } else {
                            Ok(rat(num, den))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let v = ValuationProfile::new(rows)?;
        v.check_dims(inst.n(), inst.m())?;
        if let Some(agent) = (0..inst.n()).find(|&i| !row_is_consistent(v.row(i), inst.ranking(i)))
        {
            return Err(Error::InconsistentValuations { agent });
        }
        Ok((inst, Some(v)))
    }
}

fn rational_pair(r: &Rational) -> Result<[i64; 2]> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(num), Some(den)) => Ok([num, den]),
        _ => Err(Error::Parse(format!(
            "value {} does not fit the [num, den] integer format",
            format_rational(r)
        ))),
    }
}

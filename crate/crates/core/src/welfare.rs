//! Social welfare, empirical distortion search, and generators for the
//! adversarial instances behind the distortion and impossibility bounds.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    format_rational, harmonic, int, rat, Allocation, Instance, RandomizedAllocation, Rational,
    ValuationProfile,
};
use crate::polytope::ConsistentPolytope;
use crate::rules::{next_permutation, run_relabeled, Rule, RuleId, DEFAULT_MAX_EXPANSION_N};

pub fn social_welfare(a: &Allocation, v: &ValuationProfile) -> Result<Rational> {
    v.check_dims(a.n(), a.m())?;
    Ok((0..a.n()).map(|i| v.bundle_value(i, a.bundle(i))).sum())
}

/// Each good to an agent valuing it most.
pub fn optimal_sw(v: &ValuationProfile) -> Rational {
    (0..v.m())
        .map(|g| {
            (0..v.n())
                .map(|i| v.value(i, g))
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .sum()
}

/// Exact expected welfare; permutation mixtures are expanded for up to
/// [`DEFAULT_MAX_EXPANSION_N`] agents.
pub fn expected_sw(ra: &RandomizedAllocation, v: &ValuationProfile) -> Result<Rational> {
    expected_sw_capped(ra, v, DEFAULT_MAX_EXPANSION_N)
}

pub fn expected_sw_capped(
    ra: &RandomizedAllocation,
    v: &ValuationProfile,
    max_n: usize,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for (a, p) in ra.support(max_n)? {
        total += social_welfare(&a, v)? * p;
    }
    Ok(total)
}

/// Average welfare of `rule` over `samples` uniformly random relabelings.
pub fn sampled_expected_sw(
    rule: RuleId,
    inst: &Instance,
    v: &ValuationProfile,
    samples: usize,
    seed: u64,
) -> Result<Rational> {
    if samples == 0 {
        return Err(Error::Precondition(
            "at least one sample is required".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..inst.n()).collect();
    let mut total = Rational::zero();
    for _ in 0..samples {
        order.shuffle(&mut rng);
        total += social_welfare(&run_relabeled(rule, inst, &order)?, v)?;
    }
    Ok(total / int(samples as i64))
}

/// `optimal_sw / achieved`, infinite when nothing is achieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistortionRatio {
    Finite(Rational),
    Infinite,
}

impl DistortionRatio {
    pub fn of(optimal: &Rational, achieved: &Rational) -> Self {
        if achieved.is_zero() {
            DistortionRatio::Infinite
        } else {
            DistortionRatio::Finite(optimal / achieved)
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            DistortionRatio::Finite(r) => Some(r),
            DistortionRatio::Infinite => None,
        }
    }
}

impl Ord for DistortionRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DistortionRatio::Finite(a), DistortionRatio::Finite(b)) => a.cmp(b),
            (DistortionRatio::Finite(_), DistortionRatio::Infinite) => Ordering::Less,
            (DistortionRatio::Infinite, DistortionRatio::Finite(_)) => Ordering::Greater,
            (DistortionRatio::Infinite, DistortionRatio::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for DistortionRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DistortionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistortionRatio::Finite(r) => f.write_str(&format_rational(r)),
            DistortionRatio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every profile whose rows are vertices of the agents' polytopes.
    ExhaustiveVertices,
    Sampled {
        samples: usize,
    },
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMode::ExhaustiveVertices => f.write_str("exhaustive-vertices"),
            SearchMode::Sampled { .. } => f.write_str("sampled"),
        }
    }
}

/// Cap on the number of vertex profiles explored exhaustively.
pub const VERTEX_PRODUCT_CAP: u64 = 1_000_000;

/// The worst welfare ratio found over the explored profiles: a lower bound
/// on the rule's distortion at this instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistortionReport {
    pub instance_id: String,
    pub rule: String,
    pub worst_ratio: DistortionRatio,
    pub witness: ValuationProfile,
    pub mode: SearchMode,
    pub seed: u64,
}

/// A stable 64-bit FNV-1a fingerprint of the instance.
pub fn instance_fingerprint(inst: &Instance) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let header = [inst.n(), inst.m(), inst.k()];
    for word in header.iter().chain(inst.rankings().iter().flatten()) {
        for byte in (*word as u64).to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("n{}-m{}-k{}-{hash:016x}", inst.n(), inst.m(), inst.k())
}

pub fn empirical_distortion(
    rule: Rule,
    inst: &Instance,
    mode: SearchMode,
    seed: u64,
) -> Result<DistortionReport> {
    let ra = rule.run(inst)?;
    let support = ra.support(DEFAULT_MAX_EXPANSION_N)?;
    let mut report = empirical_distortion_of(&support, inst, mode, seed)?;
    report.rule = rule.to_string();
    Ok(report)
}

/// [`empirical_distortion`] for an explicit lottery over allocations.
pub fn empirical_distortion_of(
    support: &[(Allocation, Rational)],
    inst: &Instance,
    mode: SearchMode,
    seed: u64,
) -> Result<DistortionReport> {
    if inst.m() == 0 {
        return Err(Error::EmptyMarket);
    }
    let n = inst.n();
    for (a, _) in support {
        a.check_dims(n, inst.m())?;
    }
    // expected value of agent i's bundle under row w
    let agent_value = |i: usize, w: &[Rational]| -> Rational {
        support
            .iter()
            .map(|(a, p)| a.bundle(i).iter().map(|&g| &w[g]).sum::<Rational>() * p)
            .sum()
    };
    let mut best: Option<(DistortionRatio, Vec<Vec<Rational>>)> = None;
    let mut consider = |rows: Vec<Vec<Rational>>, achieved: Rational| {
        let optimal: Rational = (0..inst.m())
            .map(|g| rows.iter().map(|r| &r[g]).max().cloned().expect("n >= 1"))
            .sum();
        let ratio = DistortionRatio::of(&optimal, &achieved);
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, rows));
        }
    };
    match mode {
        SearchMode::ExhaustiveVertices => {
            let polytopes: Vec<_> = (0..n)
                .map(|i| ConsistentPolytope::for_agent(inst, i))
                .collect();
            let product = polytopes
                .iter()
                .try_fold(1u64, |acc, p| acc.checked_mul(p.vertex_count()))
                .unwrap_or(u64::MAX);
            if product > VERTEX_PRODUCT_CAP {
                return Err(Error::CapExceeded {
                    what: "vertex profiles",
                    limit: VERTEX_PRODUCT_CAP,
                    found: product,
                });
            }
            let mut vertices = Vec::with_capacity(n);
            for (i, p) in polytopes.iter().enumerate() {
                let rows: Vec<(Vec<Rational>, Rational)> = p
                    .extreme_points()?
                    .map(|w| {
                        let value = agent_value(i, &w);
                        (w, value)
                    })
                    .collect();
                vertices.push(rows);
            }
            let mut idx = vec![0usize; n];
            loop {
                let rows = (0..n).map(|i| vertices[i][idx[i]].0.clone()).collect();
                let achieved = (0..n).map(|i| &vertices[i][idx[i]].1).sum();
                consider(rows, achieved);
                let mut pos = 0;
                loop {
                    if pos == n {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < vertices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
            }
        }
        SearchMode::Sampled { samples } => {
            if samples == 0 {
                return Err(Error::Precondition(
                    "at least one sample is required".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let rows = (0..n)
                    .map(|i| ConsistentPolytope::for_agent(inst, i).sample_with(&mut rng))
                    .collect::<Result<Vec<_>>>()?;
                let achieved = (0..n).map(|i| agent_value(i, &rows[i])).sum();
                consider(rows, achieved);
            }
        }
    }
    let (worst_ratio, rows) = best.expect("at least one profile explored");
    Ok(DistortionReport {
        instance_id: instance_fingerprint(inst),
        rule: "explicit".into(),
        worst_ratio,
        witness: ValuationProfile::new(rows)?,
        mode,
        seed,
    })
}

/// Cap on `x^n` for [`gen_thm1`].
pub const THM1_MAX_GOODS: u64 = 1_000_000;

/// `n` agents with identical complete rankings over `x^n` goods and a
/// family of "type" valuations: type `ℓ` (1-based) values the first `x^ℓ`
/// goods at `1/x^ℓ` each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm1Family {
    pub instance: Instance,
    pub x: usize,
}

pub fn gen_thm1(n: usize, x: usize, max_goods: u64) -> Result<Thm1Family> {
    if n == 0 {
        return Err(Error::ZeroAgents);
    }
    if x < 2 {
        return Err(Error::Precondition(format!(
            "x must be at least 2 (x = {x})"
        )));
    }
    let m = (x as u64)
        .checked_pow(n as u32)
        .filter(|&m| m <= max_goods)
        .ok_or(Error::CapExceeded {
            what: "goods x^n",
            limit: max_goods,
            found: (x as u64).saturating_pow(n as u32),
        })? as usize;
    Ok(Thm1Family {
        instance: Instance::identical(n, m, m)?,
        x,
    })
}

impl Thm1Family {
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    fn size(&self, level: usize) -> usize {
        self.x.pow(level as u32)
    }

    pub fn type_row(&self, level: usize) -> Vec<Rational> {
        let liked = self.size(level);
        let mut row = vec![Rational::zero(); self.instance.m()];
        for value in row.iter_mut().take(liked) {
            *value = rat(1, liked as i64);
        }
        row
    }

    /// Profile where agent `i` has type `tau[i]` (1-based levels, a bijection).
    pub fn profile(&self, tau: &[usize]) -> Result<ValuationProfile> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        if tau.len() != n
            || tau
                .iter()
                .any(|&l| l == 0 || l > n || std::mem::replace(&mut seen[l], true))
        {
            return Err(Error::Precondition(format!(
                "{tau:?} is not a bijection onto types 1..={n}"
            )));
        }
        ValuationProfile::new(tau.iter().map(|&l| self.type_row(l)).collect())
    }

    /// Blocks `W_1 = [0, x)` and `W_ℓ = [x^(ℓ-1), x^ℓ)`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (1..=self.n())
            .map(|l| {
                let start = if l == 1 { 0 } else { self.size(l - 1) };
                (start..self.size(l)).collect()
            })
            .collect()
    }

    /// Each agent receives the block of their own type.
    pub fn block_allocation(&self, tau: &[usize]) -> Result<Allocation> {
        let blocks = self.blocks();
        Allocation::new(
            tau.iter().map(|&l| blocks[l - 1].clone()).collect(),
            self.instance.m(),
        )
    }

    pub fn welfare_floor(&self) -> Rational {
        (Rational::one() - rat(1, self.x as i64)) * int(self.n() as i64)
    }

    /// The type assignment minimising the expected welfare of `support`.
    pub fn worst_assignment(
        &self,
        support: &[(Allocation, Rational)],
    ) -> Result<(Vec<usize>, Rational)> {
        let n = self.n();
        if n > DEFAULT_MAX_EXPANSION_N {
            return Err(Error::CapExceeded {
                what: "agents for type assignments",
                limit: DEFAULT_MAX_EXPANSION_N as u64,
                found: n as u64,
            });
        }
        let mut tau: Vec<usize> = (1..=n).collect();
        let mut worst: Option<(Vec<usize>, Rational)> = None;
        loop {
            let v = self.profile(&tau)?;
            let mut welfare = Rational::zero();
            for (a, p) in support {
                welfare += social_welfare(a, &v)? * p;
            }
            if worst.as_ref().is_none_or(|(_, w)| welfare < *w) {
                worst = Some((tau.clone(), welfare));
            }
            if !next_permutation(&mut tau) {
                break;
            }
        }
        Ok(worst.expect("n >= 1"))
    }
}

/// The `m = n` instance where everyone ranks `g* = 0` first and a group
/// good second. Groups are pairs of agents; for odd `n` the last agent
/// clones agent 0 and joins group 0, and the last good is ranked last by all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm2Family {
    pub instance: Instance,
    /// `groups[l]` ranks good `l + 1` second.
    pub groups: Vec<Vec<usize>>,
}

pub fn gen_thm2(n: usize) -> Result<Thm2Family> {
    if n < 2 {
        return Err(Error::NTooSmall { n, min: 2 });
    }
    let even = n - n % 2;
    let mut groups: Vec<Vec<usize>> = (0..even / 2).map(|l| vec![2 * l, 2 * l + 1]).collect();
    if n % 2 == 1 {
        groups[0].push(n - 1);
    }
    let mut rankings = vec![Vec::new(); n];
    for (l, members) in groups.iter().enumerate() {
        for &agent in members {
            let second = l + 1;
            let mut r = vec![0, second];
            r.extend((1..n).filter(|&g| g != second));
            rankings[agent] = r;
        }
    }
    Ok(Thm2Family {
        instance: Instance::new(n, n, n, rankings)?,
        groups,
    })
}

impl Thm2Family {
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    /// `1 + (groups - 1)/2`: the welfare the alternative allocation reaches.
    pub fn welfare_floor(&self) -> Rational {
        Rational::one() + rat(self.groups.len() as i64 - 1, 2)
    }

    /// For a one-good-per-agent allocation, a consistent profile with welfare
    /// `1/n`, and an alternative one-good-per-agent allocation whose welfare
    /// under that profile is at least [`Thm2Family::welfare_floor`].
    pub fn adversarial(&self, a: &Allocation) -> Result<(ValuationProfile, Allocation)> {
        let n = self.n();
        a.check_dims(n, n)?;
        if a.bundles().iter().any(|b| b.len() != 1) {
            return Err(Error::Precondition(
                "every agent must receive exactly one good".into(),
            ));
        }
        let holder = a.owner_of(0).expect("g* is allocated");
        let uniform = vec![rat(1, n as i64); n];
        let mut only_star = vec![Rational::zero(); n];
        only_star[0] = int(1);
        let mut rows = vec![only_star.clone(); n];
        rows[holder] = uniform;
        let mut alt: Vec<Option<usize>> = vec![None; n];
        for (l, members) in self.groups.iter().enumerate() {
            let good = l + 1;
            if members.contains(&holder) {
                let partner = *members
                    .iter()
                    .find(|&&i| i != holder)
                    .expect("groups have two members");
                alt[partner] = Some(0);
            } else {
                let loser = *members
                    .iter()
                    .find(|&&i| a.bundle(i)[0] != good)
                    .expect("only one member can hold the group good");
                let mut row = vec![Rational::zero(); n];
                row[0] = rat(1, 2);
                row[good] = rat(1, 2);
                rows[loser] = row;
                alt[loser] = Some(good);
            }
        }
        let mut free = (0..n).filter(|g| !alt.contains(&Some(*g)));
        let owners: Vec<(usize, usize)> = alt
            .iter()
            .enumerate()
            .map(|(agent, g)| {
                (
                    agent,
                    g.unwrap_or_else(|| free.next().expect("as many goods as agents")),
                )
            })
            .collect();
        let mut by_good = vec![0; n];
        for (agent, good) in owners {
            by_good[good] = agent;
        }
        Ok((
            ValuationProfile::new(rows)?,
            Allocation::from_owners(&by_good, n)?,
        ))
    }
}

/// Identical top-`k` rankings `0 ≻ 1 ≻ ... ≻ k-1` with `m > n`, `k >= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsUpperFamily {
    pub instance: Instance,
}

pub fn gen_mms_upper(n: usize, m: usize, k: usize) -> Result<MmsUpperFamily> {
    if m <= n {
        return Err(Error::MNotGreaterThanN { n, m });
    }
    if k < n {
        return Err(Error::KBelowN { k, required: n });
    }
    Ok(MmsUpperFamily {
        instance: Instance::identical(n, m, k)?,
    })
}

impl MmsUpperFamily {
    /// `k / (H_n (m-n) - (m-k))`, or `None` when the denominator is not positive.
    pub fn cap(&self) -> Result<Option<Rational>> {
        let (n, m, k) = (self.instance.n(), self.instance.m(), self.instance.k());
        let denominator = harmonic(n)? * int((m - n) as i64) - int((m - k) as i64);
        Ok((denominator > Rational::zero()).then(|| int(k as i64) / denominator))
    }

    /// Whether the cap says nothing (absent or at least 1).
    pub fn cap_is_vacuous(&self) -> Result<bool> {
        Ok(self.cap()?.is_none_or(|c| c >= Rational::one()))
    }

    /// A consistent profile under which some agent gets at most
    /// `cap * MMS_i` from `a`.
    ///
    /// If the first `n` goods go to distinct agents, the holder of good
    /// `i - 1` (role `i`) gets value `F b` on goods `0..i-1`, zero on their
    /// own unranked goods and `b` elsewhere, where `R = m - q_i - i + 1`,
    /// `F = floor(R / (n-i+1))` and `b = 1/((i-1) F + R)`. Otherwise an
    /// agent without any of those goods values exactly them, at `1/n` each.
    pub fn adversarial(&self, a: &Allocation) -> Result<ValuationProfile> {
        let (n, m, k) = (self.instance.n(), self.instance.m(), self.instance.k());
        a.check_dims(n, m)?;
        let holders: Vec<usize> = (0..n)
            .map(|g| a.owner_of(g).expect("complete allocation"))
            .collect();
        let uniform = vec![rat(1, m as i64); m];
        let mut rows = vec![uniform; n];
        if let Some(empty) = (0..n).find(|i| !holders.contains(i)) {
            let mut row = vec![Rational::zero(); m];
            for value in row.iter_mut().take(n) {
                *value = rat(1, n as i64);
            }
            rows[empty] = row;
            return ValuationProfile::new(rows);
        }
        for role in 1..=n {
            let agent = holders[role - 1];
            let own_unranked: Vec<usize> = a
                .bundle(agent)
                .iter()
                .copied()
                .filter(|&g| g >= k)
                .collect();
            let r = m - own_unranked.len() - role + 1;
            let f = r / (n - role + 1);
            let b = rat(1, ((role - 1) * f + r) as i64);
            let mut row = vec![b.clone(); m];
            for value in row.iter_mut().take(role - 1) {
                *value = &b * int(f as i64);
            }
            for g in own_unranked {
                row[g] = Rational::zero();
            }
            rows[agent] = row;
        }
        ValuationProfile::new(rows)
    }
}

/// The property an impossibility fixture defeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureTag {
    Efx,
    Eq1,
    Eqx,
    Ef1Distortion,
    MmsPositive,
}

impl fmt::Display for FixtureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureTag::Efx => "efx",
            FixtureTag::Eq1 => "eq1",
            FixtureTag::Eqx => "eqx",
            FixtureTag::Ef1Distortion => "ef1-distortion",
            FixtureTag::MmsPositive => "mms-positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub instance: Instance,
    pub tag: FixtureTag,
}

impl Fixture {
    /// A consistent profile under which `a` fails the tagged property, or
    /// (for the distortion tag) yields zero welfare. `None` if `a` is
    /// outside the construction's case split.
    pub fn adversarial(&self, a: &Allocation) -> Result<Option<ValuationProfile>> {
        a.check_dims(self.instance.n(), self.instance.m())?;
        match self.tag {
            FixtureTag::Efx => efx_witness(a).map(Some),
            FixtureTag::Eq1 | FixtureTag::Eqx => eq1_witness(a).map(Some),
            FixtureTag::Ef1Distortion => ef1_k0_witness(a),
            FixtureTag::MmsPositive => mms_positive_witness(&self.instance, a).map(Some),
        }
    }
}

pub fn gen_impossibility_fixtures() -> Result<Vec<Fixture>> {
    let two_by_four = Instance::identical(2, 4, 4)?;
    let mut fixtures = vec![
        Fixture {
            instance: two_by_four.clone(),
            tag: FixtureTag::Efx,
        },
        Fixture {
            instance: two_by_four.clone(),
            tag: FixtureTag::Eq1,
        },
        Fixture {
            instance: two_by_four,
            tag: FixtureTag::Eqx,
        },
        Fixture {
            instance: Instance::identical(2, 2, 0)?,
            tag: FixtureTag::Ef1Distortion,
        },
    ];
    for (n, m, k) in [(3, 4, 0), (3, 5, 1), (4, 6, 2), (4, 7, 1)] {
        fixtures.push(Fixture {
            instance: Instance::identical(n, m, k)?,
            tag: FixtureTag::MmsPositive,
        });
    }
    Ok(fixtures)
}

fn uniform_row(m: usize) -> Vec<Rational> {
    vec![rat(1, m as i64); m]
}

fn two_by_four(a: &Allocation) -> Result<()> {
    if a.n() != 2 || a.m() != 4 {
        return Err(Error::DimensionMismatch(
            "fixture has 2 agents and 4 goods".into(),
        ));
    }
    Ok(())
}

/// Unequal bundles: uniform values. Equal bundles: the agent without good 0
/// values it at 1 and the others at 1/4, normalised.
fn efx_witness(a: &Allocation) -> Result<ValuationProfile> {
    two_by_four(a)?;
    if a.bundle(0).len() != a.bundle(1).len() {
        return ValuationProfile::new(vec![uniform_row(4), uniform_row(4)]);
    }
    let other = 1 - a.owner_of(0).expect("complete allocation");
    let mut rows = vec![uniform_row(4), uniform_row(4)];
    rows[other] = vec![rat(4, 7), rat(1, 7), rat(1, 7), rat(1, 7)];
    ValuationProfile::new(rows)
}

/// Unequal bundles: uniform values. Equal bundles: the holder of good 0 is
/// uniform, the other agent values only good 0.
fn eq1_witness(a: &Allocation) -> Result<ValuationProfile> {
    two_by_four(a)?;
    if a.bundle(0).len() != a.bundle(1).len() {
        return ValuationProfile::new(vec![uniform_row(4), uniform_row(4)]);
    }
    let other = 1 - a.owner_of(0).expect("complete allocation");
    let mut rows = vec![uniform_row(4), uniform_row(4)];
    rows[other] = vec![int(1), int(0), int(0), int(0)];
    ValuationProfile::new(rows)
}

/// With empty rankings and one good each, each agent can value only the
/// other's good.
fn ef1_k0_witness(a: &Allocation) -> Result<Option<ValuationProfile>> {
    if a.n() != 2 || a.m() != 2 {
        return Err(Error::DimensionMismatch(
            "fixture has 2 agents and 2 goods".into(),
        ));
    }
    if a.bundle(0).len() != 1 {
        return Ok(None);
    }
    let mut rows = vec![vec![int(0), int(0)]; 2];
    rows[0][a.bundle(1)[0]] = int(1);
    rows[1][a.bundle(0)[0]] = int(1);
    ValuationProfile::new(rows).map(Some)
}

/// For identical top-`k` rankings with `k < n - 1` and `m > n`: the agent
/// with the smallest bundle among those holding no ranked good values the
/// ranked goods and enough other goods outside their bundle at `1/n`.
pub fn mms_positive_witness(inst: &Instance, a: &Allocation) -> Result<ValuationProfile> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    a.check_dims(n, m)?;
    let top = inst.common_top_set().ok_or(Error::TopKSetsDisagree)?;
    if k + 1 >= n || m <= n {
        return Err(Error::Precondition(format!(
            "requires k < n - 1 and m > n (n = {n}, m = {m}, k = {k})"
        )));
    }
    let victim = (0..n)
        .filter(|&i| a.bundle(i).iter().all(|g| !top.contains(g)))
        .min_by_key(|&i| (a.bundle(i).len(), i))
        .expect("at least n - k agents hold no ranked good");
    let mut row = vec![Rational::zero(); m];
    let liked = inst
        .ranking(victim)
        .iter()
        .copied()
        .chain((0..m).filter(|g| !top.contains(g) && !a.bundle(victim).contains(g)))
        .take(n);
    for g in liked {
        row[g] = rat(1, n as i64);
    }
    let mut rows = vec![uniform_row(m); n];
    rows[victim] = row;
    ValuationProfile::new(rows)
}

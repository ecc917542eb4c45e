//! Fairness properties: cardinal checks against a concrete valuation
//! profile, an exact maximin-share oracle, and "necessary" checks that must
//! hold for every valuation consistent with the rankings.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{format_rational, rat, Allocation, Instance, Rational, ValuationProfile};
use crate::polytope::ConsistentPolytope;

fn check(a: &Allocation, v: &ValuationProfile) -> Result<()> {
    v.check_dims(a.n(), a.m())
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn max_value<'a>(v: &'a ValuationProfile, agent: usize, bundle: &[usize]) -> Option<&'a Rational> {
    bundle.iter().map(|&g| v.value(agent, g)).max()
}

/// Ordered pairs `(i, j)` where agent `i` still envies `j` after removing
/// `i`'s most valued good from `A_j`.
pub fn ef1_violations(a: &Allocation, v: &ValuationProfile) -> Result<Vec<(usize, usize)>> {
    check(a, v)?;
    Ok(pairs(a.n())
        .filter(|&(i, j)| {
            let own = v.bundle_value(i, a.bundle(i));
            let Some(best) = max_value(v, i, a.bundle(j)) else {
                return false;
            };
            own < v.bundle_value(i, a.bundle(j)) - best
        })
        .collect())
}

pub fn is_ef1(a: &Allocation, v: &ValuationProfile) -> Result<bool> {
    Ok(ef1_violations(a, v)?.is_empty())
}

pub fn is_efx(a: &Allocation, v: &ValuationProfile) -> Result<bool> {
    check(a, v)?;
    Ok(pairs(a.n()).all(|(i, j)| {
        let own = v.bundle_value(i, a.bundle(i));
        let Some(least) = a.bundle(j).iter().map(|&g| v.value(i, g)).min() else {
            return true;
        };
        own >= v.bundle_value(i, a.bundle(j)) - least
    }))
}

/// Equitability up to one good: `v_i(A_i) >= v_j(A_j \ {g})` for `j`'s most
/// valued `g`, whenever `A_j` is nonempty.
pub fn is_eq1(a: &Allocation, v: &ValuationProfile) -> Result<bool> {
    check(a, v)?;
    Ok(pairs(a.n()).all(|(i, j)| {
        let Some(best) = max_value(v, j, a.bundle(j)) else {
            return true;
        };
        v.bundle_value(i, a.bundle(i)) >= v.bundle_value(j, a.bundle(j)) - best
    }))
}

/// Equitability up to any good `g` of `A_j` with `v_j(g) > 0`.
pub fn is_eqx(a: &Allocation, v: &ValuationProfile) -> Result<bool> {
    check(a, v)?;
    Ok(pairs(a.n()).all(|(i, j)| {
        let positive = a
            .bundle(j)
            .iter()
            .map(|&g| v.value(j, g))
            .filter(|x| x.is_positive())
            .min();
        let Some(least) = positive else {
            // v_j(A_j) = 0, nothing to compare against
            return true;
        };
        v.bundle_value(i, a.bundle(i)) >= v.bundle_value(j, a.bundle(j)) - least
    }))
}

pub fn is_balanced(a: &Allocation) -> bool {
    let sizes = a.bundles().iter().map(Vec::len);
    match (sizes.clone().min(), sizes.max()) {
        (Some(lo), Some(hi)) => hi - lo <= 1,
        _ => true,
    }
}

/// Size limits for the exact maximin-share search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmsCap {
    pub max_m: usize,
    pub max_n: usize,
}

impl MmsCap {
    pub fn new(max_m: usize, max_n: usize) -> Result<Self> {
        if max_m == 0 || max_n == 0 {
            return Err(Error::Precondition("MMS caps must be positive".into()));
        }
        Ok(Self { max_m, max_n })
    }
}

impl Default for MmsCap {
    fn default() -> Self {
        Self {
            max_m: 12,
            max_n: 4,
        }
    }
}

trait Weight: Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self> {}
impl<T> Weight for T where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>
{
}

struct PartitionSearch<T> {
    goods: Vec<T>,
    suffix: Vec<T>,
    bundles: Vec<T>,
    best: T,
    ceiling: T,
}

impl<T: Weight> PartitionSearch<T> {
    /// Max over partitions into `n` bundles of the min bundle weight.
    fn run(mut goods: Vec<T>, n: usize, ceiling: T) -> T {
        goods.sort_unstable_by(|a, b| b.cmp(a));
        let mut suffix = vec![T::zero(); goods.len() + 1];
        for idx in (0..goods.len()).rev() {
            let mut s = suffix[idx + 1].clone();
            s += &goods[idx];
            suffix[idx] = s;
        }
        let mut search = Self {
            goods,
            suffix,
            bundles: vec![T::zero(); n],
            best: T::zero(),
            ceiling,
        };
        search.descend(0, 0);
        search.best
    }

    fn descend(&mut self, idx: usize, opened: usize) {
        if self.best == self.ceiling {
            return;
        }
        let smallest = self.bundles.iter().min().expect("n >= 1").clone();
        if idx == self.goods.len() {
            if smallest > self.best {
                self.best = smallest;
            }
            return;
        }
        let mut bound = smallest;
        bound += &self.suffix[idx];
        if bound <= self.best {
            return;
        }
        // bundles are interchangeable: good idx may open at most one new bundle
        let limit = (opened + 1).min(self.bundles.len());
        for b in 0..limit {
            let good = self.goods[idx].clone();
            self.bundles[b] += &good;
            self.descend(idx + 1, opened.max(b + 1));
            self.bundles[b] -= &good;
        }
    }
}

/// Exact maximin share of `agent`: the best min-bundle value over all
/// partitions of the goods into `n` bundles.
pub fn mms_value(agent: usize, v: &ValuationProfile, n: usize, cap: MmsCap) -> Result<Rational> {
    if agent >= v.n() {
        return Err(Error::AgentOutOfRange { agent, n: v.n() });
    }
    if n == 0 {
        return Err(Error::ZeroAgents);
    }
    mms_of_row(v.row(agent), n, cap)
}

/// [`mms_value`] for a single value row.
pub fn mms_of_row(row: &[Rational], n: usize, cap: MmsCap) -> Result<Rational> {
    let m = row.len();
    if m > cap.max_m {
        return Err(Error::CapExceeded {
            what: "goods for the MMS oracle",
            limit: cap.max_m as u64,
            found: m as u64,
        });
    }
    if n > cap.max_n {
        return Err(Error::CapExceeded {
            what: "agents for the MMS oracle",
            limit: cap.max_n as u64,
            found: n as u64,
        });
    }
    if n == 0 {
        return Err(Error::ZeroAgents);
    }
    if m < n {
        return Ok(Rational::zero());
    }
    let scale = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&scale / x.denom()))
        .collect();
    let total: BigInt = scaled.iter().sum();
    let ceiling = total.div_floor(&BigInt::from(n));
    let fast: Option<Vec<u128>> = if total.to_u128().is_some() {
        scaled.iter().map(ToPrimitive::to_u128).collect()
    } else {
        None
    };
    let best = match fast {
        Some(goods) => {
            let ceiling = ceiling.to_u128().expect("fits with the total");
            BigInt::from(PartitionSearch::run(goods, n, ceiling))
        }
        None => PartitionSearch::run(scaled, n, ceiling),
    };
    Ok(Rational::new(best, scale))
}

/// `v_i(A_i) >= alpha * MMS_i` for every agent, exactly.
pub fn is_alpha_mms(
    a: &Allocation,
    v: &ValuationProfile,
    alpha: &Rational,
    cap: MmsCap,
) -> Result<bool> {
    check(a, v)?;
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(Error::AlphaOutOfRange(format_rational(alpha)));
    }
    if alpha.is_zero() {
        return Ok(true);
    }
    for i in 0..a.n() {
        let mms = mms_value(i, v, a.n(), cap)?;
        if v.bundle_value(i, a.bundle(i)) < alpha * mms {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_goods(set: &[usize], m: usize) -> Result<()> {
    match set.iter().find(|&&g| g >= m) {
        Some(&good) => Err(Error::GoodOutOfRange { good, m }),
        None => Ok(()),
    }
}

/// Whether `v(X) >= v(Y)` for every valuation consistent with `ranking`.
///
/// Goods in both sets cancel. On the rest, `X` must match each good of `Y`
/// with a ranked good ranked no lower, which reduces to prefix counts.
pub fn necessary_dominates(ranking: &[usize], m: usize, x: &[usize], y: &[usize]) -> Result<bool> {
    check_goods(x, m)?;
    check_goods(y, m)?;
    let mut in_x = vec![false; m];
    let mut in_y = vec![false; m];
    for &g in x {
        in_x[g] = true;
    }
    for &g in y {
        in_y[g] = true;
    }
    let only_y = (0..m).filter(|&g| in_y[g] && !in_x[g]).count();
    let (mut x_count, mut y_count) = (0usize, 0usize);
    for &g in ranking {
        x_count += usize::from(in_x[g] && !in_y[g]);
        y_count += usize::from(in_y[g] && !in_x[g]);
        if x_count < y_count {
            return Ok(false);
        }
    }
    Ok(x_count >= only_y)
}

fn check_instance(a: &Allocation, inst: &Instance) -> Result<()> {
    a.check_dims(inst.n(), inst.m())
}

fn without(bundle: &[usize], good: usize) -> Vec<usize> {
    bundle.iter().copied().filter(|&g| g != good).collect()
}

/// EF1 for every consistent valuation profile.
pub fn necessary_ef1(a: &Allocation, inst: &Instance) -> Result<bool> {
    necessary_envy(a, inst, false)
}

/// EFX for every consistent valuation profile.
pub fn necessary_efx(a: &Allocation, inst: &Instance) -> Result<bool> {
    necessary_envy(a, inst, true)
}

fn necessary_envy(a: &Allocation, inst: &Instance, every_good: bool) -> Result<bool> {
    check_instance(a, inst)?;
    let m = inst.m();
    for (i, j) in pairs(a.n()) {
        let other = a.bundle(j);
        if other.is_empty() {
            continue;
        }
        let mut outcomes = other
            .iter()
            .map(|&g| necessary_dominates(inst.ranking(i), m, a.bundle(i), &without(other, g)));
        let ok = if every_good {
            outcomes.try_fold(true, |acc, r| r.map(|b| acc && b))?
        } else {
            outcomes.try_fold(false, |acc, r| r.map(|b| acc || b))?
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn min_own_values(a: &Allocation, inst: &Instance) -> Result<Vec<Rational>> {
    (0..a.n())
        .map(|i| {
            ConsistentPolytope::for_agent(inst, i)
                .bundle_value_bounds(a.bundle(i))
                .map(|(lo, _)| lo)
        })
        .collect()
}

/// Largest `v_j(A_j) - max_{g in A_j} v_j(g)` over `j`'s consistent valuations.
fn max_value_after_best_removed(inst: &Instance, j: usize, bundle: &[usize]) -> Result<Rational> {
    let ranking = inst.ranking(j);
    match ranking.iter().find(|g| bundle.contains(g)) {
        // the highest-ranked good of the bundle is its most valued one under every consistent v
        Some(&top) => Ok(ConsistentPolytope::for_agent(inst, j)
            .bundle_value_bounds(&without(bundle, top))?
            .1),
        None => {
            let s = bundle.len();
            Ok(rat(s as i64 - 1, (inst.k() + s) as i64))
        }
    }
}

/// EQ1 for every consistent valuation profile. Valuations of different
/// agents vary independently, so each pair compares `i`'s least possible
/// value for `A_i` with `j`'s largest possible value after removal.
pub fn necessary_eq1(a: &Allocation, inst: &Instance) -> Result<bool> {
    check_instance(a, inst)?;
    if inst.m() == 0 {
        return Ok(true);
    }
    let lows = min_own_values(a, inst)?;
    for j in 0..a.n() {
        let bundle = a.bundle(j);
        if bundle.is_empty() {
            continue;
        }
        let high = max_value_after_best_removed(inst, j, bundle)?;
        if (0..a.n()).any(|i| i != j && lows[i] < high) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// EQX for every consistent valuation profile.
pub fn necessary_eqx(a: &Allocation, inst: &Instance) -> Result<bool> {
    check_instance(a, inst)?;
    if inst.m() == 0 {
        return Ok(true);
    }
    let lows = min_own_values(a, inst)?;
    for j in 0..a.n() {
        let bundle = a.bundle(j);
        let polytope = ConsistentPolytope::for_agent(inst, j);
        for &g in bundle {
            let (_, high) = polytope.bundle_value_bounds(&without(bundle, g))?;
            if (0..a.n()).any(|i| i != j && lows[i] < high) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// With `s_i = |A_i ∩ T|` for the common ranked set `T`: `s_i >= |A_j| - 1`
/// for all `i != j`.
pub fn lemma1_condition(a: &Allocation, inst: &Instance) -> Result<bool> {
    check_instance(a, inst)?;
    let top = inst.common_top_set().ok_or(Error::TopKSetsDisagree)?;
    let s: Vec<usize> = a
        .bundles()
        .iter()
        .map(|b| b.iter().filter(|g| top.contains(g)).count())
        .collect();
    Ok(pairs(a.n()).all(|(i, j)| s[i] + 1 >= a.bundle(j).len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_allocations, int};
    use proptest::prelude::*;

    fn alloc(bundles: Vec<Vec<usize>>, m: usize) -> Allocation {
        Allocation::new(bundles, m).unwrap()
    }

    fn profile(rows: &[&[(i64, i64)]]) -> ValuationProfile {
        ValuationProfile::new(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn uniform(n: usize, m: usize) -> ValuationProfile {
        ValuationProfile::new(vec![vec![rat(1, m as i64); m]; n]).unwrap()
    }

    #[test]
    fn ef1_examples() {
        let v = uniform(2, 2);
        assert!(is_ef1(&alloc(vec![vec![0], vec![1]], 2), &v).unwrap());
        assert!(!is_ef1(&alloc(vec![vec![], vec![0, 1]], 2), &v).unwrap());
        let v = uniform(2, 3);
        assert!(is_ef1(&alloc(vec![vec![0], vec![1, 2]], 3), &v).unwrap());
        assert!(matches!(
            is_ef1(&alloc(vec![vec![0], vec![1]], 2), &uniform(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn efx_eq_balanced_examples() {
        let v = uniform(2, 4);
        let a = alloc(vec![vec![0, 1], vec![2, 3]], 4);
        assert!(is_efx(&a, &v).unwrap());
        assert!(is_eq1(&a, &v).unwrap());
        assert!(is_eqx(&a, &v).unwrap());
        assert!(is_balanced(&a));
        assert!(!is_balanced(&alloc(vec![vec![0, 1, 2], vec![3]], 4)));

        let v = profile(&[&[(0, 1), (1, 2), (1, 2)], &[(1, 3), (1, 3), (1, 3)]]);
        assert!(!is_eq1(&alloc(vec![vec![0], vec![1, 2]], 3), &v).unwrap());

        // EF1 but not EFX: removing the small good still leaves envy
        let v = profile(&[&[(1, 2), (1, 4), (1, 4)], &[(1, 2), (1, 4), (1, 4)]]);
        let a = alloc(vec![vec![1], vec![0, 2]], 3);
        assert!(is_ef1(&a, &v).unwrap());
        assert!(!is_efx(&a, &v).unwrap());
    }

    #[test]
    fn eqx_ignores_zero_valued_goods() {
        let v = profile(&[&[(1, 2), (1, 2), (0, 1)], &[(1, 2), (1, 2), (0, 1)]]);
        // agent 1 holds {1, 2}; only good 1 is positive, and removing it leaves 0
        let a = alloc(vec![vec![0], vec![1, 2]], 3);
        assert!(is_eqx(&a, &v).unwrap());
        // agent 1's all-zero bundle binds nothing
        let v = profile(&[&[(1, 1), (0, 1), (0, 1)], &[(1, 1), (0, 1), (0, 1)]]);
        let a = alloc(vec![vec![0], vec![1, 2]], 3);
        assert!(is_eqx(&a, &v).unwrap());
    }

    #[test]
    fn mms_examples() {
        let cap = MmsCap::default();
        assert_eq!(
            mms_of_row(&[rat(1, 2), rat(1, 3), rat(1, 6)], 2, cap).unwrap(),
            rat(1, 2)
        );
        assert_eq!(mms_of_row(&[int(1)], 2, cap).unwrap(), int(0));
        assert_eq!(mms_of_row(&vec![rat(1, 3); 3], 3, cap).unwrap(), rat(1, 3));
        assert_eq!(mms_of_row(&vec![rat(1, 4); 4], 1, cap).unwrap(), int(1));
        assert!(matches!(
            mms_of_row(&vec![rat(1, 13); 13], 2, cap),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            mms_of_row(&vec![rat(1, 5); 5], 5, cap),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn alpha_mms_examples() {
        let cap = MmsCap::default();
        let v = profile(&[&[(1, 2), (1, 3), (1, 6)], &[(1, 2), (1, 3), (1, 6)]]);
        let a = alloc(vec![vec![0], vec![1, 2]], 3);
        assert!(is_alpha_mms(&a, &v, &int(1), cap).unwrap());
        assert!(is_alpha_mms(&alloc(vec![vec![0, 1, 2], vec![]], 3), &v, &int(0), cap).unwrap());

        let v = uniform(2, 2);
        assert!(!is_alpha_mms(&alloc(vec![vec![0, 1], vec![]], 2), &v, &rat(1, 2), cap).unwrap());
        assert!(matches!(
            is_alpha_mms(&alloc(vec![vec![0], vec![1]], 2), &v, &rat(3, 2), cap),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    /// Max-min over every labeling of goods to bundles, no pruning.
    fn naive_mms(row: &[Rational], n: usize) -> Rational {
        let m = row.len();
        let mut best = Rational::zero();
        let mut labels = vec![0usize; m];
        loop {
            let mut sums = vec![Rational::zero(); n];
            for (g, &b) in labels.iter().enumerate() {
                sums[b] += &row[g];
            }
            let min = sums.into_iter().min().unwrap();
            if min > best {
                best = min;
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    return best;
                }
                labels[pos] += 1;
                if labels[pos] < n {
                    break;
                }
                labels[pos] = 0;
                pos += 1;
            }
        }
    }

    fn unit_row(m: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(0i64..20, m).prop_filter_map("nonzero", |w| {
            let total: i64 = w.iter().sum();
            (total > 0).then(|| w.iter().map(|&x| rat(x, total)).collect())
        })
    }

    proptest! {
        #[test]
        fn mms_matches_naive_enumeration(
            row in (1usize..=7).prop_flat_map(unit_row),
            n in 1usize..=3,
        ) {
            prop_assert_eq!(mms_of_row(&row, n, MmsCap::default()).unwrap(), naive_mms(&row, n));
        }

        #[test]
        fn mms_at_most_proportional_share(row in (1usize..=9).prop_flat_map(unit_row), n in 1usize..=4) {
            let mms = mms_of_row(&row, n, MmsCap::default()).unwrap();
            prop_assert!(mms <= rat(1, n as i64));
        }

        #[test]
        fn efx_implies_ef1(
            rows in (2usize..=3, 1usize..=5).prop_flat_map(|(n, m)| {
                (prop::collection::vec(unit_row(m), n), prop::collection::vec(0..n, m))
            }),
        ) {
            let (rows, owners) = rows;
            let n = rows.len();
            let v = ValuationProfile::new(rows).unwrap();
            let a = Allocation::from_owners(&owners, n).unwrap();
            if is_efx(&a, &v).unwrap() {
                prop_assert!(is_ef1(&a, &v).unwrap());
            }
            if is_eqx(&a, &v).unwrap() {
                prop_assert!(is_eq1(&a, &v).unwrap());
            }
        }
    }

    #[test]
    fn mms_equals_share_for_uniform_multiples() {
        for n in 1..=4 {
            for m in [n, 2 * n, 3 * n] {
                if m <= 12 {
                    let row = vec![rat(1, m as i64); m];
                    assert_eq!(
                        mms_of_row(&row, n, MmsCap::default()).unwrap(),
                        rat(1, n as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let full = [0, 1, 2, 3];
        assert!(necessary_dominates(&full, 4, &[0, 2], &[1, 3]).unwrap());
        assert!(!necessary_dominates(&full, 4, &[1, 2], &[0]).unwrap());
        assert!(!necessary_dominates(&[0], 3, &[1, 2], &[0]).unwrap());
        // a shared good cancels
        assert!(necessary_dominates(&[0], 3, &[0, 1], &[1]).unwrap());
        assert!(necessary_dominates(&[], 3, &[0, 1], &[1]).unwrap());
        assert!(!necessary_dominates(&[], 3, &[0], &[1]).unwrap());
        assert!(necessary_dominates(&[0], 3, &[0], &[1]).unwrap());
        assert_eq!(
            necessary_dominates(&full, 4, &[4], &[]),
            Err(Error::GoodOutOfRange { good: 4, m: 4 })
        );
    }

    fn subsets(m: usize) -> Vec<Vec<usize>> {
        (0u32..1 << m)
            .map(|mask| (0..m).filter(|&g| mask >> g & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn dominance_agrees_with_vertex_scan() {
        for m in 1..=5 {
            for k in [0, 1, m / 2, m] {
                let ranking: Vec<usize> = (0..k).rev().collect();
                let polytope = ConsistentPolytope::new(ranking.clone(), m).unwrap();
                let vertices: Vec<_> = polytope.extreme_points().unwrap().collect();
                for x in subsets(m) {
                    for y in subsets(m) {
                        let scan = vertices.iter().all(|w| {
                            x.iter().map(|&g| &w[g]).sum::<Rational>()
                                >= y.iter().map(|&g| &w[g]).sum::<Rational>()
                        });
                        assert_eq!(
                            necessary_dominates(&ranking, m, &x, &y).unwrap(),
                            scan,
                            "m={m} k={k} X={x:?} Y={y:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn necessary_ef1_examples() {
        let inst = Instance::identical(2, 4, 4).unwrap();
        assert!(necessary_ef1(&alloc(vec![vec![0, 2], vec![1, 3]], 4), &inst).unwrap());
        assert!(!necessary_ef1(&alloc(vec![vec![0, 1], vec![2, 3]], 4), &inst).unwrap());
        let inst = Instance::identical(2, 2, 2).unwrap();
        let a = alloc(vec![vec![0, 1], vec![]], 2);
        assert!(!necessary_ef1(&a, &inst).unwrap());
        assert!(!lemma1_condition(&a, &inst).unwrap());
    }

    /// Cross-check against every vertex valuation. EF1 conditions of agent
    /// `i` depend on `v_i` alone, so rows can be checked one agent at a time.
    fn ef1_on_all_vertices(a: &Allocation, inst: &Instance) -> bool {
        (0..inst.n()).all(|i| {
            ConsistentPolytope::for_agent(inst, i)
                .extreme_points()
                .unwrap()
                .all(|w| {
                    let v = ValuationProfile::new(vec![w; inst.n()]).unwrap();
                    ef1_violations(a, &v).unwrap().iter().all(|&(x, _)| x != i)
                })
        })
    }

    #[test]
    fn necessary_ef1_agrees_with_vertex_profiles() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=3 {
            for m in 1..=5 {
                for k in [0, 1, m] {
                    for _ in 0..3 {
                        let inst = Instance::random(n, m, k, &mut rng).unwrap();
                        for a in all_allocations(n, m) {
                            assert_eq!(
                                necessary_ef1(&a, &inst).unwrap(),
                                ef1_on_all_vertices(&a, &inst),
                                "{a} on {:?}",
                                inst.rankings()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn necessary_eq_checks_match_vertex_profiles_for_ranked_bundles() {
        // two agents with complete rankings: every bound is attained at a vertex
        let inst = Instance::new(2, 3, 3, vec![vec![0, 1, 2], vec![2, 0, 1]]).unwrap();
        for a in all_allocations(2, 3) {
            let by_vertices = ConsistentPolytope::for_agent(&inst, 0)
                .extreme_points()
                .unwrap()
                .all(|w0| {
                    ConsistentPolytope::for_agent(&inst, 1)
                        .extreme_points()
                        .unwrap()
                        .all(|w1| {
                            let v = ValuationProfile::new(vec![w0.clone(), w1]).unwrap();
                            is_eq1(&a, &v).unwrap()
                        })
                });
            assert_eq!(necessary_eq1(&a, &inst).unwrap(), by_vertices, "{a}");
        }
    }

    #[test]
    fn unranked_bundle_removal_bound() {
        // k = 1, A_j = two unranked goods: sup of v(A_j) - max is 1/3 at (1/3, 1/3, 1/3)
        let inst = Instance::new(2, 3, 1, vec![vec![0], vec![0]]).unwrap();
        assert_eq!(
            max_value_after_best_removed(&inst, 1, &[1, 2]).unwrap(),
            rat(1, 3)
        );
        let a = alloc(vec![vec![0], vec![1, 2]], 3);
        // agent 0's least value for the ranked good is also 1/3
        assert!(necessary_eq1(&a, &inst).unwrap());
        let a = alloc(vec![vec![1], vec![0, 2]], 3);
        assert!(!necessary_eq1(&a, &inst).unwrap());
    }

    #[test]
    fn lemma1_examples() {
        let inst = Instance::identical(2, 4, 2).unwrap();
        assert!(lemma1_condition(&alloc(vec![vec![0, 2], vec![1, 3]], 4), &inst).unwrap());
        assert!(!lemma1_condition(&alloc(vec![vec![2, 3], vec![0, 1]], 4), &inst).unwrap());
        let inst = Instance::identical(2, 2, 1).unwrap();
        assert!(lemma1_condition(&alloc(vec![vec![0], vec![1]], 2), &inst).unwrap());
        let inst = Instance::new(2, 2, 1, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            lemma1_condition(&alloc(vec![vec![0], vec![1]], 2), &inst),
            Err(Error::TopKSetsDisagree)
        );
    }

    #[test]
    fn lemma1_is_necessary_under_agreement() {
        for (n, m, k) in [(2, 4, 2), (3, 5, 2), (2, 5, 3), (3, 6, 3)] {
            let inst = Instance::identical(n, m, k).unwrap();
            for a in all_allocations(n, m) {
                if necessary_ef1(&a, &inst).unwrap() {
                    assert!(lemma1_condition(&a, &inst).unwrap(), "{a}");
                }
            }
        }
    }
}

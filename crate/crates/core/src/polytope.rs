//! The set of unit-sum valuations consistent with one top-k ranking.
//!
//! With ranking `g(1), ..., g(k)` the constraints form a poset (a chain with
//! every unranked good hanging below `g(k)`), so the vertices are the uniform
//! distributions on its nonempty up-sets: the prefixes `top-t` for
//! `t = 1..=k` and `top-k ∪ U` for nonempty subsets `U` of unranked goods.
//! With an empty ranking every nonempty subset is an up-set.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{rat, Instance, Rational, ValuationProfile};

/// Largest `m` for which the empty-ranking simplex vertices are enumerated.
pub const EMPTY_RANKING_MAX_M: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConsistentPolytope {
    ranking: Vec<usize>,
    m: usize,
}

impl ConsistentPolytope {
    pub fn new(ranking: Vec<usize>, m: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &good in &ranking {
            if good >= m {
                return Err(Error::GoodOutOfRange { good, m });
            }
            if !seen.insert(good) {
                return Err(Error::DuplicateGoodInRanking { agent: 0, good });
            }
        }
        Ok(Self { ranking, m })
    }

    pub fn for_agent(inst: &Instance, agent: usize) -> Self {
        Self {
            ranking: inst.ranking(agent).to_vec(),
            m: inst.m(),
        }
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.ranking.len()
    }

    fn unranked(&self) -> Vec<usize> {
        let ranked: BTreeSet<usize> = self.ranking.iter().copied().collect();
        (0..self.m).filter(|g| !ranked.contains(g)).collect()
    }

    /// Number of vertices, saturating at `u64::MAX`.
    pub fn vertex_count(&self) -> u64 {
        let u = self.m - self.k();
        let subsets = if u >= 64 { u64::MAX } else { (1u64 << u) - 1 };
        (self.k() as u64).saturating_add(subsets)
    }

    /// Lazily enumerates the vertices: prefixes first, then `top-k ∪ U` with
    /// `U` ordered by size and then lexicographically.
    pub fn extreme_points(&self) -> Result<ExtremePoints> {
        if self.ranking.is_empty() && self.m > EMPTY_RANKING_MAX_M {
            return Err(Error::CapExceeded {
                what: "goods under an empty ranking",
                limit: EMPTY_RANKING_MAX_M as u64,
                found: self.m as u64,
            });
        }
        Ok(ExtremePoints {
            ranking: self.ranking.clone(),
            unranked: self.unranked(),
            m: self.m,
            prefix: if self.m == 0 { usize::MAX } else { 1 },
            subset: Vec::new(),
            done: self.m == 0,
        })
    }

    /// Exact `(min, max)` of `v(S)` over the polytope.
    ///
    /// A linear objective is optimised at a vertex, and on `top-k ∪ U` only
    /// `|U ∩ S|` and `|U \ S|` matter, so the scan is polynomial.
    pub fn bundle_value_bounds(&self, bundle: &[usize]) -> Result<(Rational, Rational)> {
        if self.m == 0 {
            return Err(Error::EmptyMarket);
        }
        let mut in_bundle = vec![false; self.m];
        for &good in bundle {
            if good >= self.m {
                return Err(Error::GoodOutOfRange { good, m: self.m });
            }
            in_bundle[good] = true;
        }
        let k = self.k();
        let mut candidates = Vec::new();
        let mut ranked_inside = 0usize;
        for (t, &g) in self.ranking.iter().enumerate() {
            ranked_inside += usize::from(in_bundle[g]);
            candidates.push(rat(ranked_inside as i64, t as i64 + 1));
        }
        let unranked = self.unranked();
        let unranked_inside = unranked.iter().filter(|&&g| in_bundle[g]).count();
        let unranked_outside = unranked.len() - unranked_inside;
        for a in 0..=unranked_inside {
            // value is monotone in b, so only the extreme b values matter
            let b_lo = usize::from(a == 0 && k == 0);
            for b in [b_lo, unranked_outside] {
                if b < b_lo || b > unranked_outside {
                    continue;
                }
                let size = k + a + b;
                if size == 0 {
                    continue;
                }
                candidates.push(rat((ranked_inside + a) as i64, size as i64));
            }
        }
        let min = candidates
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let max = candidates
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero);
        Ok((min, max))
    }

    /// A random point of the polytope: a convex combination of a few random
    /// vertices with random positive integer weights. Deterministic in `seed`.
    pub fn sample_consistent(&self, seed: u64) -> Result<Vec<Rational>> {
        self.sample_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Rational>> {
        if self.m == 0 {
            return Err(Error::EmptyMarket);
        }
        let unranked = self.unranked();
        let k = self.k();
        let count = rng.random_range(1..=4);
        let mut row = vec![Rational::zero(); self.m];
        let mut total = 0i64;
        for _ in 0..count {
            let support: Vec<usize> = if k > 0 && (unranked.is_empty() || rng.random_bool(0.5)) {
                let t = rng.random_range(1..=k);
                self.ranking[..t].to_vec()
            } else {
                let mut chosen: Vec<usize> = unranked
                    .iter()
                    .copied()
                    .filter(|_| rng.random_bool(0.5))
                    .collect();
                if chosen.is_empty() {
                    chosen.push(unranked[rng.random_range(0..unranked.len())]);
                }
                self.ranking.iter().copied().chain(chosen).collect()
            };
            let w = rng.random_range(1..=12i64);
            let share = rat(w, support.len() as i64);
            for &g in &support {
                row[g] += &share;
            }
            total += w;
        }
        let total = rat(total, 1);
        Ok(row.into_iter().map(|x| x / &total).collect())
    }
}

/// Lazy vertex iterator returned by [`ConsistentPolytope::extreme_points`].
#[derive(Debug, Clone)]
pub struct ExtremePoints {
    ranking: Vec<usize>,
    unranked: Vec<usize>,
    m: usize,
    prefix: usize,
    // indices into `unranked`, current nonempty subset
    subset: Vec<usize>,
    done: bool,
}

impl ExtremePoints {
    fn uniform(&self, support: impl Iterator<Item = usize> + Clone) -> Vec<Rational> {
        let size = support.clone().count() as i64;
        let mut row = vec![Rational::zero(); self.m];
        for g in support {
            row[g] = rat(1, size);
        }
        row
    }

    fn advance_subset(&mut self) -> bool {
        let u = self.unranked.len();
        let s = self.subset.len();
        if s == 0 {
            if u == 0 {
                return false;
            }
            self.subset = vec![0];
            return true;
        }
        // next combination of the same size, else first of the next size
        let mut i = s;
        while i > 0 {
            i -= 1;
            if self.subset[i] < u - s + i {
                self.subset[i] += 1;
                for j in i + 1..s {
                    self.subset[j] = self.subset[j - 1] + 1;
                }
                return true;
            }
        }
        if s == u {
            return false;
        }
        self.subset = (0..=s).collect();
        true
    }
}

impl Iterator for ExtremePoints {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.prefix <= self.ranking.len() {
            let t = self.prefix;
            self.prefix += 1;
            return Some(self.uniform(self.ranking[..t].iter().copied()));
        }
        if !self.advance_subset() {
            self.done = true;
            return None;
        }
        let extra = self.subset.iter().map(|&i| self.unranked[i]);
        let support = self.ranking.iter().copied().chain(extra);
        Some(self.uniform(support))
    }
}

/// One sampled consistent row per agent, seeded per agent from `seed`.
pub fn sample_consistent_profile(inst: &Instance, seed: u64) -> Result<ValuationProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..inst.n())
        .map(|i| ConsistentPolytope::for_agent(inst, i).sample_with(&mut rng))
        .collect::<Result<Vec<_>>>()?;
    ValuationProfile::new(rows)
}

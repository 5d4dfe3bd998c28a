use std::collections::HashMap;

use super::config::{PoolSpec, SearchConfig, SearchError};
use crate::construct::{NcPoly, Word};

/// Largest pool the enumerator will materialize.
const POOL_LIMIT: usize = 1 << 20;

pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Nonzero-coefficient assignments, leading coefficient 1.
fn coefficient_patterns(p: u32, terms: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for pos in 0..terms {
        let choices: Vec<u32> = if pos + 1 == terms { vec![1] } else { (1..p).collect() };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Words of each length in `lo..=hi`, in increasing deglex order.
pub(crate) fn monomials(gens: usize, lo: usize, hi: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level = vec![Vec::<u8>::new()];
    for len in 0..=hi {
        if len >= lo {
            out.extend(level.iter().cloned().map(Word));
        }
        level = level.iter().flat_map(|w| (0..gens as u8).map(move |g| [w.as_slice(), &[g]].concat())).collect();
    }
    out
}

fn k_subsets(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else { return };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Relations allowed by one pool spec, in enumeration order: by term
/// count, then by the positions of the words, then by coefficients.
pub(crate) fn pool_polys(p: u32, gens: usize, spec: &PoolSpec) -> Result<Vec<NcPoly>, SearchError> {
    let words = monomials(gens, spec.min_degree, spec.max_degree);
    let mut out = Vec::new();
    for t in 1..=spec.max_terms.min(words.len()) {
        let patterns = coefficient_patterns(p, t);
        let mut overflow = false;
        k_subsets(words.len(), t, |pos| {
            if overflow {
                return;
            }
            let lowest = words[pos[0]].len();
            if spec.lowest_degree.is_some_and(|d| d != lowest) {
                return;
            }
            for pat in &patterns {
                let terms = pos.iter().zip(pat).map(|(&i, &c)| (words[i].clone(), c as i64));
                out.push(NcPoly::from_terms(p, terms));
            }
            overflow = out.len() > POOL_LIMIT;
        });
        if overflow {
            return Err(SearchError::Config(format!("relation pool exceeds {POOL_LIMIT} polynomials")));
        }
    }
    Ok(out)
}

/// One pool with its choice counts: a choice is a `k`-subset for some `k`
/// in the count range, ordered by `k`, then lexicographically.
pub(crate) struct Pool {
    pub polys: Vec<NcPoly>,
    lookup: HashMap<NcPoly, usize>,
    min: usize,
    /// `counts[i]` = number of subsets of size `min + i`.
    counts: Vec<u64>,
    pub total: u64,
}

impl Pool {
    fn new(polys: Vec<NcPoly>, min: usize, max: usize) -> Result<Self, SearchError> {
        let n = polys.len() as u64;
        let counts: Vec<u64> = (min..=max)
            .map(|k| binomial(n, k as u64))
            .collect::<Option<_>>()
            .ok_or_else(|| SearchError::Config("candidate count overflows u64".into()))?;
        let total = counts
            .iter()
            .try_fold(0u64, |a, &c| a.checked_add(c))
            .ok_or_else(|| SearchError::Config("candidate count overflows u64".into()))?;
        let lookup = polys.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Self { polys, lookup, min, counts, total })
    }

    pub fn index_of(&self, poly: &NcPoly) -> Option<usize> {
        self.lookup.get(poly).copied()
    }

    pub fn unrank(&self, mut r: u64) -> Vec<usize> {
        let n = self.polys.len() as u64;
        for (i, &c) in self.counts.iter().enumerate() {
            if r >= c {
                r -= c;
                continue;
            }
            let k = (self.min + i) as u64;
            let mut combo = Vec::with_capacity(k as usize);
            let mut x = 0u64;
            for pos in 0..k {
                loop {
                    let rest = binomial(n - x - 1, k - pos - 1).unwrap_or(u64::MAX);
                    if r < rest {
                        break;
                    }
                    r -= rest;
                    x += 1;
                }
                combo.push(x as usize);
                x += 1;
            }
            return combo;
        }
        panic!("choice rank out of range");
    }

    /// Inverse of [`Pool::unrank`]; `combo` must be strictly increasing.
    pub fn rank(&self, combo: &[usize]) -> u64 {
        let n = self.polys.len() as u64;
        let k = combo.len() as u64;
        let mut r: u64 = self.counts[..combo.len() - self.min].iter().sum();
        let mut prev = 0u64;
        for (pos, &c) in combo.iter().enumerate() {
            // Sum of C(n-1-x, j) for x in prev..c, by the hockey stick.
            let j = k - pos as u64;
            let c = c as u64;
            r += binomial(n - prev, j).unwrap_or(0) - binomial(n - c, j).unwrap_or(0);
            prev = c + 1;
        }
        r
    }

    /// Advances to the next choice in order; false after the last one.
    pub fn advance(&self, combo: &mut Vec<usize>) -> bool {
        let n = self.polys.len();
        let k = combo.len();
        if let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
        let next = k + 1;
        if next < self.min + self.counts.len() && next <= n {
            *combo = (0..next).collect();
            return true;
        }
        false
    }
}

/// All candidates: one choice per pool, the last pool varying fastest.
pub struct CandidateSpace {
    pub(crate) gens: usize,
    pub(crate) pools: Vec<Pool>,
    total: u64,
    /// `images[perm][pool][i]`: index of poly `i` after a generator
    /// permutation, if it stays in the pool.
    images: Vec<Vec<Vec<Option<usize>>>>,
}

/// Per-pool choices of a candidate.
pub type Choice = Vec<Vec<usize>>;

impl CandidateSpace {
    pub fn new(cfg: &SearchConfig) -> Result<Self, SearchError> {
        let gens = cfg.generators.len();
        let mut pools = Vec::with_capacity(cfg.pools.len());
        for spec in &cfg.pools {
            pools.push(Pool::new(pool_polys(cfg.p, gens, spec)?, spec.count[0], spec.count[1])?);
        }
        let total = pools
            .iter()
            .try_fold(1u64, |a, p| a.checked_mul(p.total))
            .ok_or_else(|| SearchError::Config("candidate count overflows u64".into()))?;
        let images = permutations(gens)
            .iter()
            .map(|perm| {
                pools
                    .iter()
                    .map(|pool| pool.polys.iter().map(|poly| pool.index_of(&poly.permuted(cfg.p, perm))).collect())
                    .collect()
            })
            .collect();
        Ok(Self { gens, pools, total, images })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn pool_sizes(&self) -> Vec<usize> {
        self.pools.iter().map(|p| p.polys.len()).collect()
    }

    pub fn unrank(&self, mut index: u64) -> Choice {
        assert!(index < self.total, "candidate index out of range");
        let mut out = vec![Vec::new(); self.pools.len()];
        for (i, pool) in self.pools.iter().enumerate().rev() {
            out[i] = pool.unrank(index % pool.total);
            index /= pool.total;
        }
        out
    }

    pub fn rank(&self, choice: &Choice) -> u64 {
        self.pools.iter().zip(choice).fold(0, |acc, (pool, c)| acc * pool.total + pool.rank(c))
    }

    /// Moves to the next candidate; returns the first pool whose choice
    /// changed, or `None` past the end.
    pub fn advance(&self, choice: &mut Choice) -> Option<usize> {
        for i in (0..self.pools.len()).rev() {
            if self.pools[i].advance(&mut choice[i]) {
                return Some(i);
            }
            choice[i] = self.pools[i].unrank(0);
        }
        None
    }

    pub fn relations(&self, choice: &Choice) -> Vec<NcPoly> {
        self.pools.iter().zip(choice).flat_map(|(pool, c)| c.iter().map(|&i| pool.polys[i].clone())).collect()
    }

    /// Global index of a relation list split per pool, if it lies in the space.
    pub fn index_of(&self, per_pool: &[Vec<NcPoly>]) -> Option<u64> {
        if per_pool.len() != self.pools.len() {
            return None;
        }
        let mut choice = Vec::with_capacity(self.pools.len());
        for (pool, polys) in self.pools.iter().zip(per_pool) {
            let mut c: Vec<usize> = polys.iter().map(|p| pool.index_of(p)).collect::<Option<_>>()?;
            c.sort_unstable();
            c.dedup();
            if c.len() != polys.len() || c.len() < pool.min || c.len() >= pool.min + pool.counts.len() {
                return None;
            }
            choice.push(c);
        }
        Some(self.rank(&choice))
    }

    /// Smallest index among the images of `choice` under generator
    /// permutations.
    pub fn canonical_index(&self, choice: &Choice) -> u64 {
        let mut best = self.rank(choice);
        let mut combo = Vec::new();
        'perm: for maps in &self.images {
            let mut index = 0u64;
            for ((pool, map), c) in self.pools.iter().zip(maps).zip(choice) {
                combo.clear();
                for &i in c {
                    match map[i] {
                        Some(j) => combo.push(j),
                        None => continue 'perm,
                    }
                }
                combo.sort_unstable();
                index = index * pool.total + pool.rank(&combo);
            }
            best = best.min(index);
        }
        best
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u8>| {
                let free: Vec<u8> = (0..n as u8).filter(|g| !prefix.contains(g)).collect();
                free.into_iter().map(move |g| [prefix.as_slice(), &[g]].concat())
            })
            .collect();
    }
    out.retain(|p| p.iter().enumerate().any(|(i, &g)| g as usize != i));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pools: Vec<PoolSpec>) -> SearchConfig {
        let mut c = SearchConfig::default_bounds(&["u", "v"], vec![vec![2, 1]]);
        c.pools = pools;
        c
    }

    fn spec(lo: usize, hi: usize, terms: usize, count: [usize; 2]) -> PoolSpec {
        PoolSpec { min_degree: lo, max_degree: hi, lowest_degree: None, max_terms: terms, count }
    }

    #[test]
    fn pool_sizes() {
        assert_eq!(monomials(2, 2, 3).len(), 12);
        assert_eq!(pool_polys(2, 2, &spec(2, 2, 2, [1, 1])).unwrap().len(), 4 + 6);
        // Over F_3 the non-leading coefficient has two choices.
        assert_eq!(pool_polys(3, 2, &spec(2, 2, 2, [1, 1])).unwrap().len(), 4 + 2 * 6);
        let lowest = PoolSpec { lowest_degree: Some(2), ..spec(2, 3, 2, [1, 1]) };
        // Quadratic singletons, then pairs with a quadratic term.
        assert_eq!(pool_polys(2, 2, &lowest).unwrap().len(), 4 + 6 + 4 * 8);
    }

    #[test]
    fn rank_inverts_unrank_and_advance_steps_by_one() {
        let space = CandidateSpace::new(&cfg(vec![spec(2, 2, 1, [0, 2]), spec(3, 3, 1, [1, 2])])).unwrap();
        assert_eq!(space.total(), (1 + 4 + 6) * (8 + 28));
        let mut choice = space.unrank(0);
        for i in 0..space.total() {
            assert_eq!(space.rank(&choice), i);
            assert_eq!(space.unrank(i), choice);
            let changed = space.advance(&mut choice);
            assert_eq!(changed.is_none(), i + 1 == space.total());
        }
    }

    #[test]
    fn canonical_index_is_permutation_invariant() {
        let space = CandidateSpace::new(&cfg(vec![spec(2, 2, 2, [2, 2])])).unwrap();
        let choice = space.unrank(7);
        let rels = space.relations(&choice);
        let swapped: Vec<NcPoly> = rels.iter().map(|r| r.permuted(2, &[1, 0])).collect();
        let other = space.index_of(&[swapped]).unwrap();
        assert_eq!(space.canonical_index(&choice), space.canonical_index(&space.unrank(other)));
        assert!(space.canonical_index(&choice) <= 7.min(other));
    }
}

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ring::{is_prime, RingError, MAX_ORDER};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("search config: {0}")]
    Config(String),
    #[error("cannot access `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in `{path}`: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("refusing to resume: {0}")]
    CheckpointMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl SearchError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        SearchError::Io { path: path.display().to_string(), source }
    }
}

/// One family of relations: every term has degree in
/// `min_degree..=max_degree`, at most `max_terms` terms, leading
/// coefficient 1, and `count[0]..=count[1]` of them are drawn per
/// candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolSpec {
    pub min_degree: usize,
    pub max_degree: usize,
    /// Exact degree of the lowest term, when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowest_degree: Option<usize>,
    pub max_terms: usize,
    pub count: [usize; 2],
}

/// A bounded space of presentations over `F_p` and what to look for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default = "default_p")]
    pub p: u32,
    pub generators: Vec<String>,
    pub pools: Vec<PoolSpec>,
    /// Wanted D-sequences; a finding is local, reversible, nonsymmetric and
    /// has one of these.
    pub targets: Vec<Vec<u32>>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_order_cap")]
    pub order_cap: usize,
    /// Skip candidates whose image under a generator permutation comes
    /// earlier in the enumeration.
    #[serde(default)]
    pub canonicalize: bool,
    #[serde(default = "default_batch")]
    pub batch_size: u64,
    /// Optional `[start, end)` restriction of the global index range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[u64; 2]>,
}

fn default_p() -> u32 {
    2
}

fn default_n_max() -> usize {
    crate::construct::DEFAULT_N_MAX
}

fn default_order_cap() -> usize {
    MAX_ORDER
}

fn default_batch() -> u64 {
    1 << 20
}

impl SearchConfig {
    /// Bounds used when nothing narrower is known: one pool of relations of
    /// degree 2 to 5 with at most two terms, 1 to 6 relations.
    pub fn default_bounds(generators: &[&str], targets: Vec<Vec<u32>>) -> Self {
        Self {
            p: 2,
            generators: generators.iter().map(|g| g.to_string()).collect(),
            pools: vec![PoolSpec { min_degree: 2, max_degree: 5, lowest_degree: None, max_terms: 2, count: [1, 6] }],
            targets,
            n_max: default_n_max(),
            order_cap: default_order_cap(),
            canonicalize: true,
            batch_size: default_batch(),
            range: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let text = std::fs::read_to_string(path).map_err(|e| SearchError::io(path, e))?;
        let cfg =
            Self::from_json(&text).map_err(|source| SearchError::Json { path: path.display().to_string(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        if !is_prime(self.p as u64) {
            return bad(format!("p = {} is not prime", self.p));
        }
        if !(2..=3).contains(&self.generators.len()) {
            return bad("two or three generators required".into());
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.is_empty()
                || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || self.generators[..i].contains(g)
            {
                return bad(format!("bad or duplicate generator name `{g}`"));
            }
        }
        if self.pools.is_empty() {
            return bad("at least one relation pool required".into());
        }
        for (i, pool) in self.pools.iter().enumerate() {
            let lowest_ok = pool.lowest_degree.is_none_or(|d| (pool.min_degree..=pool.max_degree).contains(&d));
            if pool.min_degree == 0 || pool.min_degree > pool.max_degree || pool.max_terms == 0 || !lowest_ok {
                return bad(format!(
                    "pool {}: need 1 <= min_degree <= lowest_degree <= max_degree and max_terms >= 1",
                    i + 1
                ));
            }
            if pool.count[0] > pool.count[1] {
                return bad(format!("pool {}: count range is empty", i + 1));
            }
        }
        if self.targets.is_empty() || self.targets.iter().any(|t| t.is_empty() || t.contains(&0)) {
            return bad("targets must be nonempty D-sequences of positive entries".into());
        }
        if self.order_cap < 2 || self.order_cap > MAX_ORDER {
            return bad(format!("order_cap must lie in 2..={MAX_ORDER}"));
        }
        if let Some(t) = self.targets.iter().find(|t| 1 + t.iter().sum::<u32>() as usize > self.max_words()) {
            return bad(format!("target {t:?} needs more than order_cap {} allows", self.order_cap));
        }
        if self.batch_size == 0 || self.n_max == 0 {
            return bad("batch_size and n_max must be positive".into());
        }
        if let Some([a, b]) = self.range {
            if a > b {
                return bad("range start exceeds end".into());
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form; stored in checkpoints.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(serde_json::to_vec(self).expect("serializable")))
    }

    /// Largest number of basis words allowed by `order_cap`.
    pub fn max_words(&self) -> usize {
        let mut words = 0;
        let mut size = self.p as u64;
        while size <= self.order_cap as u64 {
            words += 1;
            size *= self.p as u64;
        }
        words
    }

    /// Human-readable bounds, for reports.
    pub fn describe_bounds(&self) -> String {
        let pools: Vec<String> = self
            .pools
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let lowest = p.lowest_degree.map_or(String::new(), |d| format!(", lowest term degree {d}"));
                format!(
                    "pool {}: degrees {}..{}{lowest}, at most {} terms, {}..{} relations",
                    i + 1,
                    p.min_degree,
                    p.max_degree,
                    p.max_terms,
                    p.count[0],
                    p.count[1]
                )
            })
            .collect();
        let (lo, hi) = self.pools.iter().fold((0, 0), |(a, b), p| (a + p.count[0], b + p.count[1]));
        format!(
            "F_{} on {}; {}; {lo}..{hi} relations per candidate; degree cap {}; order cap {}",
            self.p,
            self.generators.join(","),
            pools.join("; "),
            self.n_max,
            self.order_cap
        )
    }
}

/// Shard `index` of `count` (zero-based), written `i/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    /// This shard's part of `[start, end)`.
    pub fn range(&self, start: u64, end: u64) -> (u64, u64) {
        let len = (end - start) as u128;
        let at = |i: u64| start + (len * i as u128 / self.count as u128) as u64;
        (at(self.index), at(self.index + 1))
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

impl FromStr for Shard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (i, k) = s.split_once('/').ok_or_else(|| format!("shard `{s}` is not of the form i/k"))?;
        let index: u64 = i.trim().parse().map_err(|_| format!("bad shard index `{i}`"))?;
        let count: u64 = k.trim().parse().map_err(|_| format!("bad shard count `{k}`"))?;
        if count == 0 || index >= count {
            return Err(format!("shard index must satisfy 0 <= i < k, got {s}"));
        }
        Ok(Shard { index, count })
    }
}

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::info;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{SearchConfig, SearchError, Shard};
use super::fingerprint::Fingerprint;
use super::pool::{CandidateSpace, Choice};
use super::prefilter::{matches_target, Echelon, Graded, Row};
use crate::construct::{free_quotient_capped, BuildError, Presentation, PresentedRing};
use crate::linalg::Subspace;
use crate::properties::{Backend, Checker, PropertyKind};
use crate::ring::{Element, RingError};
use crate::structure::StructureProfile;

/// How a single candidate left the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The graded data of `R / m^(K+1)` rules out every target.
    Prefiltered,
    /// A generator permutation maps it to an earlier candidate.
    Noncanonical,
    /// `R / m^(K+1)` is not reversible; a local ring with a target
    /// D-sequence would equal it.
    TruncationNonreversible,
    /// `R / m^(K+1)` is symmetric.
    TruncationSymmetric,
    Unsaturated,
    Degenerate,
    OverCap,
    Nonlocal,
    OffTarget,
    Nonreversible,
    Symmetric,
    Found(Box<Finding>),
}

/// Per-outcome candidate counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub candidates: u64,
    pub prefiltered: u64,
    pub noncanonical: u64,
    pub truncation_nonreversible: u64,
    pub truncation_symmetric: u64,
    pub unsaturated: u64,
    pub degenerate: u64,
    pub over_cap: u64,
    pub nonlocal: u64,
    pub off_target: u64,
    pub nonreversible: u64,
    pub symmetric: u64,
    pub findings: u64,
}

impl Stats {
    pub fn record(&mut self, outcome: &Outcome) {
        self.candidates += 1;
        let slot = match outcome {
            Outcome::Prefiltered => &mut self.prefiltered,
            Outcome::Noncanonical => &mut self.noncanonical,
            Outcome::TruncationNonreversible => &mut self.truncation_nonreversible,
            Outcome::TruncationSymmetric => &mut self.truncation_symmetric,
            Outcome::Unsaturated => &mut self.unsaturated,
            Outcome::Degenerate => &mut self.degenerate,
            Outcome::OverCap => &mut self.over_cap,
            Outcome::Nonlocal => &mut self.nonlocal,
            Outcome::OffTarget => &mut self.off_target,
            Outcome::Nonreversible => &mut self.nonreversible,
            Outcome::Symmetric => &mut self.symmetric,
            Outcome::Found(_) => &mut self.findings,
        };
        *slot += 1;
    }

    pub fn absorb(&mut self, other: &Stats) {
        self.candidates += other.candidates;
        self.prefiltered += other.prefiltered;
        self.noncanonical += other.noncanonical;
        self.truncation_nonreversible += other.truncation_nonreversible;
        self.truncation_symmetric += other.truncation_symmetric;
        self.unsaturated += other.unsaturated;
        self.degenerate += other.degenerate;
        self.over_cap += other.over_cap;
        self.nonlocal += other.nonlocal;
        self.off_target += other.off_target;
        self.nonreversible += other.nonreversible;
        self.symmetric += other.symmetric;
        self.findings += other.findings;
    }
}

/// A local, reversible, nonsymmetric ring with a wanted D-sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub index: u64,
    pub presentation: String,
    pub order: usize,
    pub d_sequence: Vec<u32>,
    pub nilpotency_index: usize,
    pub saturation_degree: usize,
    pub properties: BTreeMap<String, bool>,
    pub profile_digest: String,
    pub fingerprint: Fingerprint,
    pub fingerprint_digest: String,
}

struct Evaluator<'a> {
    cfg: &'a SearchConfig,
    space: &'a CandidateSpace,
    graded: Graded,
    /// Full target rows `(1, D, 0, ...)` of length `K + 1`.
    targets: Vec<Vec<u32>>,
    blocks: Vec<Vec<Option<Vec<Row>>>>,
    /// `stack[i]`: echelon after the first `i` slots, and whether every
    /// extension is already ruled out.
    stack: Vec<(Echelon, bool)>,
    slots: Vec<(usize, usize)>,
    flat: Vec<(usize, usize)>,
    max_words: usize,
}

impl<'a> Evaluator<'a> {
    fn new(cfg: &'a SearchConfig, space: &'a CandidateSpace) -> Self {
        let k = cfg.targets.iter().map(Vec::len).max().unwrap_or(0) + 1;
        let graded = Graded::new(cfg.p, space.gens, k);
        let targets = cfg
            .targets
            .iter()
            .map(|t| {
                let mut row = vec![1];
                row.extend(t);
                row.resize(k + 1, 0);
                row
            })
            .collect();
        let blocks = space.pools.iter().map(|p| vec![None; p.polys.len()]).collect();
        let stack = vec![(graded.echelon(), false)];
        Self {
            cfg,
            space,
            graded,
            targets,
            blocks,
            stack,
            slots: Vec::new(),
            flat: Vec::new(),
            max_words: cfg.max_words(),
        }
    }

    /// Dimensions only drop as relations are added, so a prefix that is
    /// below every target in some degree has no surviving extension.
    fn prefilter(&mut self, choice: &Choice) -> bool {
        self.flat.clear();
        for (p, c) in choice.iter().enumerate() {
            self.flat.extend(c.iter().map(|&i| (p, i)));
        }
        let common = self.slots.iter().zip(&self.flat).take_while(|(a, b)| a == b).count();
        self.slots.truncate(common);
        self.stack.truncate(common + 1);
        for s in common..self.flat.len() {
            let (pool, poly) = self.flat[s];
            let (top, dead) = self.stack.last().expect("nonempty stack");
            let (ech, dead) = if *dead {
                (top.clone(), true)
            } else {
                let rows = self.blocks[pool][poly]
                    .get_or_insert_with(|| self.graded.rows(&self.space.pools[pool].polys[poly]));
                let mut ech = top.clone();
                self.graded.insert_all(&mut ech, rows);
                let dims = self.graded.dims(&ech);
                let dead = self.targets.iter().all(|t| dims.iter().zip(t).any(|(d, t)| d < t));
                (ech, dead)
            };
            self.stack.push((ech, dead));
            self.slots.push(self.flat[s]);
        }
        let (ech, dead) = self.stack.last().expect("nonempty stack");
        if *dead {
            return false;
        }
        let dims = self.graded.dims(ech);
        self.cfg.targets.iter().any(|t| matches_target(&dims, t))
    }

    fn evaluate(&mut self, index: u64, choice: &Choice) -> Result<Outcome, SearchError> {
        if !self.prefilter(choice) {
            return Ok(Outcome::Prefiltered);
        }
        if self.cfg.canonicalize && self.space.canonical_index(choice) < index {
            return Ok(Outcome::Noncanonical);
        }
        let (top, _) = self.stack.last().expect("nonempty stack");
        let truncation = self.graded.truncation(top);
        if truncation.has_reversibility_violation() {
            return Ok(Outcome::TruncationNonreversible);
        }
        if truncation.is_symmetric() {
            return Ok(Outcome::TruncationSymmetric);
        }
        let pres = Presentation::from_polys(
            self.cfg.p,
            self.cfg.generators.clone(),
            self.space.relations(choice),
            self.cfg.n_max,
        );
        let built = match free_quotient_capped(&pres, self.max_words) {
            Ok(b) => b,
            Err(BuildError::NotSaturated { .. }) => return Ok(Outcome::Unsaturated),
            Err(BuildError::Degenerate) => return Ok(Outcome::Degenerate),
            Err(BuildError::TooLarge { .. }) => return Ok(Outcome::OverCap),
            Err(BuildError::Ring(e)) => return Err(e.into()),
            Err(e) => return Err(SearchError::Config(e.to_string())),
        };
        let ring = &built.ring;
        if ring.order() > self.cfg.order_cap {
            return Ok(Outcome::OverCap);
        }
        let Some(d) = nilpotent_layers(&built, self.graded.degree()) else { return Ok(Outcome::Nonlocal) };
        if !self.cfg.targets.contains(&d) {
            return Ok(Outcome::OffTarget);
        }
        let checker = Checker::new(ring);
        if !checker.check(PropertyKind::Reversible, Backend::Linear)?.holds {
            return Ok(Outcome::Nonreversible);
        }
        if checker.check(PropertyKind::Symmetric, Backend::Linear)?.holds {
            return Ok(Outcome::Symmetric);
        }
        let mut properties = BTreeMap::new();
        for kind in PropertyKind::ALL {
            properties.insert(kind.name().to_string(), checker.check(kind, Backend::Auto)?.holds);
        }
        let structure = StructureProfile::compute(ring)?;
        if structure.d_sequence() != Some(d.as_slice()) {
            return Err(RingError::Internal(format!("layer dimensions {d:?} disagree with the radical chain")).into());
        }
        let fingerprint = Fingerprint::from_profile(ring, &structure);
        Ok(Outcome::Found(Box::new(Finding {
            index,
            presentation: pres.to_dsl(),
            order: ring.order(),
            d_sequence: d,
            nilpotency_index: structure.nilpotency_index,
            saturation_degree: built.saturation_degree,
            profile_digest: profile_digest(&properties),
            fingerprint_digest: fingerprint.digest(),
            fingerprint,
            properties,
        })))
    }
}

/// When the generators generate a nilpotent ideal `m` with `m^k = 0`, the
/// dimensions of `m^i / m^(i+1)` for `i >= 1`. Then `m = J` and these form
/// the D-sequence. Works from the generator images alone.
fn nilpotent_layers(built: &PresentedRing, k: usize) -> Option<Vec<u32>> {
    let ring = &built.ring;
    let p = ring.prime_field()?;
    let mut levels: Vec<Vec<Element>> = vec![vec![ring.one().clone()]];
    for _ in 0..k {
        let next = levels
            .last()
            .expect("nonempty")
            .iter()
            .flat_map(|w| built.generator_images.iter().map(move |g| ring.mul(w, g)))
            .filter(|x| !x.is_zero())
            .collect();
        levels.push(next);
    }
    if !levels[k].is_empty() {
        return None;
    }
    // Words of length >= i span m^i.
    let mut span = Subspace::zero(p, ring.rank());
    let mut dims = vec![0; k + 1];
    for i in (1..k).rev() {
        for x in &levels[i] {
            span.insert(x.0.clone());
        }
        dims[i] = span.dim();
    }
    let mut d: Vec<u32> = (1..k).map(|i| (dims[i] - dims[i + 1]) as u32).collect();
    while d.last() == Some(&0) {
        d.pop();
    }
    Some(d)
}

fn profile_digest(properties: &BTreeMap<String, bool>) -> String {
    format!("{:x}", Sha256::digest(serde_json::to_vec(properties).expect("serializable")))
}

/// Runs the pipeline on one candidate, without incremental state.
pub fn evaluate_index(cfg: &SearchConfig, space: &CandidateSpace, index: u64) -> Result<Outcome, SearchError> {
    Evaluator::new(cfg, space).evaluate(index, &space.unrank(index))
}

/// `[start, end)` of the whole configured space.
pub fn index_range(cfg: &SearchConfig, space: &CandidateSpace) -> Result<(u64, u64), SearchError> {
    match cfg.range {
        None => Ok((0, space.total())),
        Some([a, b]) if b <= space.total() => Ok((a, b)),
        Some(_) => Err(SearchError::Config(format!("range exceeds the {} candidates", space.total()))),
    }
}

/// Where and how to run one shard.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub shard: Shard,
    pub resume: bool,
    /// Stop after this many batches in this invocation, as if killed right
    /// after the checkpoint write.
    pub stop_after_batches: Option<u64>,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self { out_dir: out_dir.into(), shard: Shard::WHOLE, resume: false, stop_after_batches: None }
    }
}

/// One line of the checkpoint log, appended after each batch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    pub shard: Shard,
    pub start: u64,
    pub end: u64,
    pub next_index: u64,
    /// Last completed global index, if any.
    pub last_index: Option<u64>,
    pub stats: Stats,
}

impl Checkpoint {
    pub fn complete(&self) -> bool {
        self.next_index >= self.end
    }
}

#[derive(Clone, Debug)]
pub struct ShardReport {
    pub checkpoint: Checkpoint,
    pub findings: Vec<Finding>,
    pub findings_path: PathBuf,
    pub checkpoint_path: PathBuf,
    pub elapsed: Duration,
}

pub fn findings_path(dir: &Path, shard: Shard) -> PathBuf {
    dir.join(format!("shard-{}-of-{}.findings.jsonl", shard.index, shard.count))
}

pub fn checkpoint_path(dir: &Path, shard: Shard) -> PathBuf {
    dir.join(format!("shard-{}-of-{}.checkpoint.jsonl", shard.index, shard.count))
}

/// Last well-formed record; a torn final line is ignored.
pub fn read_checkpoint(path: &Path) -> Result<Option<Checkpoint>, SearchError> {
    if !path.exists() {
        return Ok(None);
    }
    let file = File::open(path).map_err(|e| SearchError::io(path, e))?;
    let mut last = None;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| SearchError::io(path, e))?;
        if let Ok(cp) = serde_json::from_str::<Checkpoint>(&line) {
            last = Some(cp);
        }
    }
    Ok(last)
}

/// Findings in file order; a torn final line is ignored.
pub fn read_findings(path: &Path) -> Result<Vec<Finding>, SearchError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path).map_err(|e| SearchError::io(path, e))?;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match serde_json::from_str(line) {
            Ok(f) => out.push(f),
            Err(_) if !text.ends_with('\n') || text.trim_end().ends_with(line.trim_end()) => break,
            Err(source) => return Err(SearchError::Json { path: path.display().to_string(), source }),
        }
    }
    Ok(out)
}

fn finding_line(f: &Finding) -> String {
    let mut s = serde_json::to_string(f).expect("serializable");
    s.push('\n');
    s
}

/// Writes findings one JSON object per line, the format of shard files.
pub fn write_findings(path: &Path, findings: &[Finding]) -> Result<(), SearchError> {
    let text: String = findings.iter().map(finding_line).collect();
    std::fs::write(path, text).map_err(|e| SearchError::io(path, e))
}

fn append(path: &Path, text: &str) -> Result<(), SearchError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(|e| SearchError::io(path, e))?;
    f.write_all(text.as_bytes()).and_then(|_| f.sync_data()).map_err(|e| SearchError::io(path, e))
}

/// Runs (or resumes) one shard, checkpointing after every batch.
pub fn run_shard(cfg: &SearchConfig, opts: &RunOptions) -> Result<ShardReport, SearchError> {
    cfg.validate()?;
    let started = Instant::now();
    let space = CandidateSpace::new(cfg)?;
    let (lo, hi) = index_range(cfg, &space)?;
    let (start, end) = opts.shard.range(lo, hi);
    let hash = cfg.hash();
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| SearchError::io(&opts.out_dir, e))?;
    let cp_path = checkpoint_path(&opts.out_dir, opts.shard);
    let f_path = findings_path(&opts.out_dir, opts.shard);

    let previous = if opts.resume { read_checkpoint(&cp_path)? } else { None };
    let mut cp = match previous {
        Some(prev) => {
            if prev.config_hash != hash {
                return Err(SearchError::CheckpointMismatch(format!(
                    "checkpoint config hash {} differs from {hash}",
                    prev.config_hash
                )));
            }
            if prev.shard != opts.shard || prev.start != start || prev.end != end {
                return Err(SearchError::CheckpointMismatch(format!(
                    "checkpoint covers shard {} [{}, {}), not {} [{start}, {end})",
                    prev.shard, prev.start, prev.end, opts.shard
                )));
            }
            let kept: Vec<Finding> =
                read_findings(&f_path)?.into_iter().filter(|f| f.index < prev.next_index).collect();
            write_findings(&f_path, &kept)?;
            info!("resuming shard {} at index {}", opts.shard, prev.next_index);
            prev
        }
        None => {
            write_findings(&f_path, &[])?;
            std::fs::write(&cp_path, "").map_err(|e| SearchError::io(&cp_path, e))?;
            Checkpoint {
                config_hash: hash,
                shard: opts.shard,
                start,
                end,
                next_index: start,
                last_index: None,
                stats: Stats::default(),
            }
        }
    };

    let mut ev = Evaluator::new(cfg, &space);
    let mut batches = 0u64;
    while cp.next_index < end {
        if opts.stop_after_batches.is_some_and(|n| batches >= n) {
            break;
        }
        let batch_end = end.min(cp.next_index.saturating_add(cfg.batch_size));
        let mut choice = space.unrank(cp.next_index);
        let mut lines = String::new();
        for index in cp.next_index..batch_end {
            if index > cp.next_index {
                space.advance(&mut choice);
            }
            let outcome = ev.evaluate(index, &choice)?;
            cp.stats.record(&outcome);
            if let Outcome::Found(f) = &outcome {
                info!("finding at index {index}: {}", f.presentation);
                lines.push_str(&finding_line(f));
            }
        }
        append(&f_path, &lines)?;
        cp.next_index = batch_end;
        cp.last_index = Some(batch_end - 1);
        let mut record = serde_json::to_string(&cp).expect("serializable");
        record.push('\n');
        append(&cp_path, &record)?;
        batches += 1;
        info!("shard {}: {} / {} candidates", opts.shard, cp.next_index - start, end - start);
    }
    Ok(ShardReport {
        findings: read_findings(&f_path)?,
        checkpoint: cp,
        findings_path: f_path,
        checkpoint_path: cp_path,
        elapsed: started.elapsed(),
    })
}

/// Combines `shards` completed shard outputs in `dir`, ordered by index.
pub fn merge_shards(cfg: &SearchConfig, dir: &Path, shards: u64) -> Result<(Vec<Finding>, Stats), SearchError> {
    let hash = cfg.hash();
    let mut findings = Vec::new();
    let mut stats = Stats::default();
    for index in 0..shards {
        let shard = Shard { index, count: shards };
        let cp = read_checkpoint(&checkpoint_path(dir, shard))?
            .ok_or_else(|| SearchError::CheckpointMismatch(format!("shard {shard} has no checkpoint")))?;
        if cp.config_hash != hash || !cp.complete() {
            return Err(SearchError::CheckpointMismatch(format!("shard {shard} is incomplete or from another config")));
        }
        stats.absorb(&cp.stats);
        findings.extend(read_findings(&findings_path(dir, shard))?.into_iter().filter(|f| f.index < cp.end));
    }
    findings.sort_by_key(|f| f.index);
    Ok((findings, stats))
}

/// Per-target outcome of a finished search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetStatus {
    pub d_sequence: Vec<u32>,
    pub findings: usize,
    /// `found`, or `inconclusive within bounds`.
    pub status: String,
}

/// Findings sharing a fingerprint. They need not be isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FingerprintGroup {
    pub fingerprint_digest: String,
    pub fingerprint: Fingerprint,
    pub indices: Vec<u64>,
    pub presentations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub config_hash: String,
    pub bounds: String,
    pub candidates_total: u64,
    pub stats: Stats,
    pub targets: Vec<TargetStatus>,
    pub groups: Vec<FingerprintGroup>,
}

pub fn summarize(cfg: &SearchConfig, findings: &[Finding], stats: &Stats) -> Result<SearchSummary, SearchError> {
    let space = CandidateSpace::new(cfg)?;
    let (lo, hi) = index_range(cfg, &space)?;
    let targets = cfg
        .targets
        .iter()
        .map(|t| {
            let n = findings.iter().filter(|f| &f.d_sequence == t).count();
            let status = if n > 0 { "found" } else { "inconclusive within bounds" };
            TargetStatus { d_sequence: t.clone(), findings: n, status: status.into() }
        })
        .collect();
    let mut groups: BTreeMap<&Fingerprint, FingerprintGroup> = BTreeMap::new();
    for f in findings {
        let g = groups.entry(&f.fingerprint).or_insert_with(|| FingerprintGroup {
            fingerprint_digest: f.fingerprint_digest.clone(),
            fingerprint: f.fingerprint.clone(),
            indices: Vec::new(),
            presentations: Vec::new(),
        });
        g.indices.push(f.index);
        g.presentations.push(f.presentation.clone());
    }
    Ok(SearchSummary {
        config_hash: cfg.hash(),
        bounds: cfg.describe_bounds(),
        candidates_total: hi - lo,
        stats: stats.clone(),
        targets,
        groups: groups.into_values().collect(),
    })
}

impl SearchSummary {
    pub fn to_text(&self) -> String {
        let s = &self.stats;
        let mut out = format!("bounds: {}\nconfig: {}\n", self.bounds, self.config_hash);
        out += &format!(
            "candidates: {} of {}\n  prefiltered {}, noncanonical {}, truncation nonreversible {}, truncation symmetric {}, unsaturated {}, degenerate {}, over cap {}\n  nonlocal {}, off target {}, nonreversible {}, symmetric {}, findings {}\n",
            s.candidates,
            self.candidates_total,
            s.prefiltered,
            s.noncanonical,
            s.truncation_nonreversible,
            s.truncation_symmetric,
            s.unsaturated,
            s.degenerate,
            s.over_cap,
            s.nonlocal,
            s.off_target,
            s.nonreversible,
            s.symmetric,
            s.findings
        );
        for t in &self.targets {
            out += &format!("target D={:?}: {} ({} findings)\n", t.d_sequence, t.status, t.findings);
        }
        for g in &self.groups {
            out += &format!(
                "group {} order {} ({} findings), first: {}\n",
                &g.fingerprint_digest[..12],
                g.fingerprint.order,
                g.indices.len(),
                g.presentations[0]
            );
        }
        out
    }
}

/// Rebuilds a finding and rechecks it with the exhaustive backend.
pub fn replay_finding(cfg: &SearchConfig, finding: &Finding) -> Result<bool, SearchError> {
    let space = CandidateSpace::new(cfg)?;
    let pres = Presentation::from_polys(
        cfg.p,
        cfg.generators.clone(),
        space.relations(&space.unrank(finding.index)),
        cfg.n_max,
    );
    let built = free_quotient_capped(&pres, cfg.max_words()).map_err(|e| SearchError::Config(e.to_string()))?;
    let ring = &built.ring;
    let checker = Checker::new(ring);
    let reversible = checker.check(PropertyKind::Reversible, Backend::Exhaustive)?;
    let symmetric = checker.check(PropertyKind::Symmetric, Backend::Exhaustive)?;
    let witness_ok =
        symmetric.witness.as_ref().is_some_and(|w| crate::properties::replay(ring, PropertyKind::Symmetric, w));
    let fingerprint = Fingerprint::compute(ring)?;
    Ok(pres.to_dsl() == finding.presentation
        && reversible.holds
        && !symmetric.holds
        && witness_ok
        && fingerprint == finding.fingerprint)
}

//! Bounded enumeration of presentations looking for local, reversible,
//! nonsymmetric rings with given D-sequences.

mod config;
mod fingerprint;
mod pool;
mod prefilter;
mod run;

pub use config::{PoolSpec, SearchConfig, SearchError, Shard};
pub use fingerprint::Fingerprint;
pub use pool::{CandidateSpace, Choice};
pub use run::{
    checkpoint_path, evaluate_index, findings_path, index_range, merge_shards, read_checkpoint, read_findings,
    replay_finding, run_shard, summarize, write_findings, Checkpoint, Finding, FingerprintGroup, Outcome, RunOptions,
    SearchSummary, ShardReport, Stats, TargetStatus,
};

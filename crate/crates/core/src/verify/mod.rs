//! Homomorphism checks for presentations, the shipped ring corpus, and a
//! statement audit of structural claims over a corpus.

mod audit;
mod corpus;
mod hom;

pub use audit::{
    audit_facts, statement_audit, AuditReport, ClaimResult, Counterexample, RingFacts, Verdict, WitnessRecord, BANNER,
};
pub use corpus::{builtin_corpus, builtin_ring, load_manifest, CorpusError, CorpusRing, Manifest, ManifestEntry};
pub use hom::{generated_subring, verify_generated_map, HomReport, RelationCheck, VerifyError};

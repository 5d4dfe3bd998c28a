//! Finite rings as structure constants over a finite abelian group, with
//! constructors, radical and socle structure, ring-theoretic property checks
//! with replayable witnesses, and a sharded search over presentations.

pub mod cli;
pub mod construct;
pub mod dsl;
pub mod linalg;
pub mod properties;
pub mod report;
pub mod ring;
pub mod search;
pub mod structure;
pub mod subgroup;
pub mod verify;

pub use ring::{Element, FiniteRing, RingData, RingError};

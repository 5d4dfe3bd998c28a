use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dsl::{self, DslError};
use crate::ring::FiniteRing;

/// A named ring expression in a corpus manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub expr: String,
}

/// `{"rings": [{"name": ..., "expr": ...}, ...]}`; `load(...)` paths are
/// relative to the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub rings: Vec<ManifestEntry>,
}

#[derive(Clone, Debug)]
pub struct CorpusRing {
    pub name: String,
    pub expr: String,
    pub ring: FiniteRing,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read manifest `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("corpus ring `{name}`: {source}")]
    Entry { name: String, source: DslError },
    #[error("duplicate corpus name `{0}`")]
    Duplicate(String),
}

const BUILTIN_MANIFEST: &str = include_str!("../../corpus/manifest.json");

const BUILTIN_FIXTURES: &[(&str, &str)] = &[
    ("fixtures/z4.json", include_str!("../../corpus/fixtures/z4.json")),
    ("fixtures/z8.json", include_str!("../../corpus/fixtures/z8.json")),
    ("fixtures/z9.json", include_str!("../../corpus/fixtures/z9.json")),
    ("fixtures/z4_chain.json", include_str!("../../corpus/fixtures/z4_chain.json")),
    ("fixtures/gr4_2.json", include_str!("../../corpus/fixtures/gr4_2.json")),
    ("fixtures/m2f2.json", include_str!("../../corpus/fixtures/m2f2.json")),
    ("fixtures/t2f2.json", include_str!("../../corpus/fixtures/t2f2.json")),
];

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_MANIFEST).expect("shipped manifest parses")
    }

    /// Builds every entry, resolving `load(path)` through `load`.
    pub fn build_with(&self, load: &dyn Fn(&str) -> Result<String, DslError>) -> Result<Vec<CorpusRing>, CorpusError> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.rings.len());
        for e in &self.rings {
            if !seen.insert(e.name.clone()) {
                return Err(CorpusError::Duplicate(e.name.clone()));
            }
            let wrap = |source| CorpusError::Entry { name: e.name.clone(), source };
            let expr = dsl::parse_ring_expr(&e.expr).map_err(|p| wrap(p.into()))?;
            let built = dsl::eval_with(&expr, load).map_err(wrap)?;
            out.push(CorpusRing { name: e.name.clone(), expr: e.expr.clone(), ring: built.ring });
        }
        Ok(out)
    }
}

fn builtin_fixture(path: &str) -> Result<String, DslError> {
    BUILTIN_FIXTURES.iter().find(|(name, _)| *name == path).map(|(_, text)| text.to_string()).ok_or_else(|| {
        DslError::Io {
            path: path.to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a shipped fixture"),
        }
    })
}

/// The shipped corpus; fixtures are compiled in.
pub fn builtin_corpus() -> Result<Vec<CorpusRing>, CorpusError> {
    Manifest::builtin().build_with(&builtin_fixture)
}

/// Reads a manifest file and builds its rings.
pub fn load_manifest(path: &Path) -> Result<Vec<CorpusRing>, CorpusError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Manifest::parse(&text)?.build_with(&|p| {
        let full = base.join(p);
        std::fs::read_to_string(&full).map_err(|source| DslError::Io { path: full.display().to_string(), source })
    })
}

/// Builds one shipped ring by corpus name.
pub fn builtin_ring(name: &str) -> Option<Result<FiniteRing, CorpusError>> {
    let entry = Manifest::builtin().rings.into_iter().find(|e| e.name == name)?;
    let single = Manifest { rings: vec![entry] };
    Some(single.build_with(&builtin_fixture).map(|mut v| v.pop().expect("one entry").ring))
}

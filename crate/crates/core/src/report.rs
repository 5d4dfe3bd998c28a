//! The `analyze` report: structure, all nine properties with rendered
//! witnesses, and optional timings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::dsl::{self, Built, DslError, PolyExpr};
use crate::properties::{idempotent_shortcut, replay, Backend, Checker, PropertyKind, PropertyResult};
use crate::ring::{validate, Element, FiniteRing, RingError};
use crate::structure::StructureProfile;

/// Version of the JSON layout below.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub backend: Backend,
    /// Include wall-clock timings; off by default so reports stay byte-stable.
    pub timings: bool,
    /// Look for an idempotent witness of non-reversibility.
    pub shortcut: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { backend: Backend::Auto, timings: false, shortcut: true }
    }
}

/// A witness tuple as coefficient vectors and as basis-label expressions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub coefficients: Vec<Vec<u32>>,
    pub labels: Vec<String>,
    /// Re-checked against the definition with plain ring arithmetic.
    pub replayed: bool,
}

impl WitnessReport {
    pub fn new(ring: &FiniteRing, kind: PropertyKind, witness: &[Element]) -> Self {
        Self {
            coefficients: witness.iter().map(|w| w.0.clone()).collect(),
            labels: witness.iter().map(|w| ring.render(w)).collect(),
            replayed: replay(ring, kind, witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    pub backend: &'static str,
}

impl PropertyReport {
    pub fn new(ring: &FiniteRing, res: &PropertyResult) -> Self {
        Self {
            holds: res.holds,
            witness: res.witness.as_ref().map(|w| WitnessReport::new(ring, res.kind, w)),
            backend: res.backend.name(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SocleReport {
    pub left_size: usize,
    pub right_size: usize,
    /// Size of the socle when both sides are the same subgroup.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub socle: Option<usize>,
    pub asymmetric: bool,
}

/// Idempotent `e` and `a = e g (1 - e)` with `e a = a`, `a e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortcutReport {
    pub idempotent: String,
    pub element: String,
    pub coefficients: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub input: String,
    pub order: usize,
    pub characteristic: u64,
    pub additive_type: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturation_degree: Option<usize>,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub units: usize,
    pub radical_size: usize,
    pub radical_chain: Vec<usize>,
    pub is_local: bool,
    pub residue_field: Option<u64>,
    pub d_sequence: Option<Vec<u32>>,
    pub nilpotency_index: usize,
    pub socle: SocleReport,
    pub idempotents: usize,
    pub central_idempotents: usize,
    pub indecomposable: bool,
    pub properties: BTreeMap<&'static str, PropertyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<ShortcutReport>,
    /// Milliseconds per stage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

fn ms(since: Instant) -> f64 {
    (since.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Parses, builds and analyzes `text`; `load(...)` paths are relative to
/// the working directory.
pub fn analyze(text: &str, opts: &AnalyzeOptions) -> Result<Report, DslError> {
    let start = Instant::now();
    let built = dsl::build(text)?;
    let build_ms = ms(start);
    let mut report = analyze_built(text, &built, opts)?;
    if let Some(t) = report.timings.as_mut() {
        t.insert("build".into(), build_ms);
    }
    Ok(report)
}

pub fn analyze_built(input: &str, built: &Built, opts: &AnalyzeOptions) -> Result<Report, RingError> {
    let ring = &built.ring;
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let violations = validate(&ring.to_data())?;
    if !violations.is_empty() {
        return Err(RingError::Invalid(violations));
    }
    timings.insert("validate".to_string(), ms(t));

    let t = Instant::now();
    let s = StructureProfile::compute(ring)?;
    timings.insert("structure".to_string(), ms(t));

    let checker = Checker::new(ring);
    let mut properties = BTreeMap::new();
    for kind in PropertyKind::ALL {
        let t = Instant::now();
        let res = checker.check(kind, opts.backend)?;
        timings.insert(format!("property.{}", kind.name()), ms(t));
        properties.insert(kind.name(), PropertyReport::new(ring, &res));
    }

    let shortcut = if opts.shortcut && !s.is_local() {
        let t = Instant::now();
        let found = idempotent_shortcut(ring).map(|(e, a)| ShortcutReport {
            idempotent: ring.render(&e),
            element: ring.render(&a),
            coefficients: vec![e.0.clone(), a.0.clone()],
        });
        timings.insert("shortcut".to_string(), ms(t));
        found
    } else {
        None
    };

    let same_socle = s.socle_left.members() == s.socle_right.members();
    Ok(Report {
        schema: SCHEMA,
        input: input.to_string(),
        order: ring.order(),
        characteristic: ring.characteristic(),
        additive_type: ring.additive().primary_type(),
        saturation_degree: built.saturation_degree(),
        basis: (0..ring.rank()).map(|i| ring.label(i)).collect(),
        warnings: built.warnings().to_vec(),
        units: s.units_count(),
        radical_size: s.radical.size(),
        radical_chain: s.chain_sizes(),
        is_local: s.is_local(),
        residue_field: s.residue_field_order(),
        d_sequence: s.d_sequence().map(<[u32]>::to_vec),
        nilpotency_index: s.nilpotency_index,
        socle: SocleReport {
            left_size: s.socle_left.size(),
            right_size: s.socle_right.size(),
            socle: same_socle.then(|| s.socle_left.size()),
            asymmetric: !same_socle,
        },
        idempotents: s.idempotent_count,
        central_idempotents: s.central_idempotent_count,
        indecomposable: s.is_indecomposable,
        properties,
        shortcut,
        timings: opts.timings.then_some(timings),
    })
}

impl Report {
    pub fn property(&self, kind: PropertyKind) -> &PropertyReport {
        &self.properties[kind.name()]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "ring           {}", self.input);
        let _ = writeln!(out, "order          {}", self.order);
        let _ = writeln!(out, "characteristic {}", self.characteristic);
        let _ = writeln!(out, "additive type  {:?}", self.additive_type);
        if let Some(n) = self.saturation_degree {
            let _ = writeln!(out, "saturated at   degree {n}");
        }
        if self.basis.len() <= 16 {
            let _ = writeln!(out, "basis          {}", self.basis.join(", "));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning        {w}");
        }
        let _ = writeln!(out, "units          {}", self.units);
        let _ = writeln!(out, "radical chain  {:?}", self.radical_chain);
        let _ = writeln!(out, "local          {}", self.is_local);
        let _ = writeln!(out, "residue field  {}", opt(self.residue_field.map(|q| q.to_string())));
        let _ = writeln!(out, "D-sequence     {}", opt(self.d_sequence.as_ref().map(|d| format!("{d:?}"))));
        let _ = writeln!(out, "nilpotency     {}", self.nilpotency_index);
        match self.socle.socle {
            Some(n) => writeln!(out, "socle          {n}"),
            None => writeln!(
                out,
                "socle          left {}, right {} (asymmetric)",
                self.socle.left_size, self.socle.right_size
            ),
        }
        .ok();
        let _ = writeln!(out, "idempotents    {} ({} central)", self.idempotents, self.central_idempotents);
        for kind in PropertyKind::ALL {
            let p = self.property(kind);
            let _ = write!(out, "{:<16}{:<6} [{}]", kind.name(), p.holds, p.backend);
            if let Some(w) = &p.witness {
                let _ = write!(out, "  witness ({})", w.labels.join("; "));
            }
            out.push('\n');
        }
        if let Some(sc) = &self.shortcut {
            let _ = writeln!(out, "shortcut       e = {}, a = e g (1-e) = {}", sc.idempotent, sc.element);
        }
        if let Some(t) = &self.timings {
            for (stage, v) in t {
                let _ = writeln!(out, "time {stage:<24}{v:.3} ms");
            }
        }
        out
    }
}

/// Parses element expressions in `built` (comma-separated).
pub fn parse_elements(built: &Built, text: &str) -> Result<Vec<Element>, DslError> {
    let polys: Vec<PolyExpr> = dsl::parse_poly_list(text)?;
    polys.iter().map(|p| built.element(p)).collect()
}

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::corpus::CorpusRing;
use crate::properties::{self, Backend, PropertyKind, PropertyResult};
use crate::ring::{is_prime, Element, FiniteRing, RingError};
use crate::structure::StructureProfile;

pub const BANNER: &str = "statement audit over a finite corpus; not a proof";

/// Invariants of one corpus ring that the claims quantify over.
#[derive(Clone, Debug)]
pub struct RingFacts {
    pub name: String,
    pub order: usize,
    pub is_local: bool,
    pub residue_field_order: Option<u64>,
    pub d_sequence: Option<Vec<u32>>,
    pub radical_cube_zero: bool,
    pub is_indecomposable: bool,
    pub properties: Vec<PropertyResult>,
}

impl RingFacts {
    pub fn compute(name: &str, ring: &FiniteRing) -> Result<Self, RingError> {
        let s = StructureProfile::compute(ring)?;
        Ok(Self {
            name: name.to_string(),
            order: ring.order(),
            is_local: s.is_local(),
            residue_field_order: s.residue_field_order(),
            d_sequence: s.d_sequence().map(<[u32]>::to_vec),
            radical_cube_zero: s.power_size(3) == 1,
            is_indecomposable: s.is_indecomposable,
            properties: properties::profile(ring, Backend::Auto)?,
        })
    }

    pub fn result(&self, kind: PropertyKind) -> &PropertyResult {
        self.properties.iter().find(|r| r.kind == kind).expect("profile covers every kind")
    }

    pub fn holds(&self, kind: PropertyKind) -> bool {
        self.result(kind).holds
    }

    fn d(&self) -> &[u32] {
        self.d_sequence.as_deref().unwrap_or(&[])
    }

    fn local_reversible(&self) -> bool {
        self.is_local && self.holds(PropertyKind::Reversible)
    }

    /// `d2 = 1 and (d1 <= 2 or q = 2)` for a local reversible ring.
    fn d2_one_shape(&self) -> bool {
        let d = self.d();
        self.local_reversible() && d.len() >= 2 && d[1] == 1 && (d[0] <= 2 || self.q_is_2())
    }

    fn q_is_2(&self) -> bool {
        self.residue_field_order == Some(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "VACUOUS")]
    Vacuous,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub property: String,
    pub coefficients: Vec<Vec<u32>>,
    pub rendered: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub ring: String,
    pub detail: String,
    pub witness: Option<WitnessRecord>,
    /// The failure was reproduced with the exhaustive backend and, when
    /// present, the witness re-verified through multiplication.
    pub replayed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub statement: &'static str,
    pub tested: Vec<String>,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub banner: &'static str,
    pub rings: Vec<String>,
    pub claims: Vec<ClaimResult>,
    /// Observations that are data rather than failures.
    pub notes: Vec<String>,
    /// SHA-256 over the serialized rings, claims and notes.
    pub digest: String,
}

/// A universally quantified statement: for every ring satisfying
/// `applies`, `check` returns no failure.
struct Claim {
    id: &'static str,
    statement: &'static str,
    applies: fn(&RingFacts) -> bool,
    check: fn(&RingFacts) -> Option<Failure>,
}

struct Failure {
    detail: String,
    property: Option<PropertyKind>,
}

fn fails(kind: PropertyKind, f: &RingFacts) -> Option<Failure> {
    (!f.holds(kind)).then(|| Failure { detail: format!("{kind} fails"), property: Some(kind) })
}

fn implication(f: &RingFacts, from: PropertyKind, to: PropertyKind) -> Option<Failure> {
    if f.holds(from) {
        fails(to, f)
    } else {
        None
    }
}

use PropertyKind as K;

const CLAIMS: &[Claim] = &[
    Claim {
        id: "local-iff-indecomposable",
        statement: "a reversible ring is local if and only if it is indecomposable",
        applies: |f| f.holds(K::Reversible),
        check: |f| {
            (f.is_local != f.is_indecomposable).then(|| Failure {
                detail: format!("local = {}, indecomposable = {}", f.is_local, f.is_indecomposable),
                property: None,
            })
        },
    },
    Claim {
        id: "cube-zero-radical-symmetric",
        statement: "local reversible with J^3 = 0 implies symmetric",
        applies: |f| f.local_reversible() && f.radical_cube_zero,
        check: |f| fails(K::Symmetric, f),
    },
    Claim {
        id: "d2-one-commutative",
        statement:
            "local reversible with J^3 != 0, F of prime order, d2 = 1 and (d1 <= 2 or q = 2) implies commutative",
        applies: |f| f.d2_one_shape() && !f.radical_cube_zero && f.residue_field_order.is_some_and(is_prime),
        check: |f| fails(K::Commutative, f),
    },
    Claim {
        id: "d-2ln-shape",
        statement: "local reversible nonsymmetric with q = 2 and D = (2,l,n) has l = 3 and n >= 2",
        applies: |f| f.local_reversible() && !f.holds(K::Symmetric) && f.q_is_2() && f.d().len() == 3 && f.d()[0] == 2,
        check: |f| {
            let d = f.d();
            (!(d[1] == 3 && d[2] >= 2)).then(|| Failure { detail: format!("D = {d:?}"), property: None })
        },
    },
    Claim {
        id: "d-n21-symmetric",
        statement: "local reversible with q = 2 and D = (n,2,1) implies symmetric",
        applies: |f| f.local_reversible() && f.q_is_2() && f.d().len() == 3 && f.d()[1..] == [2, 1],
        check: |f| fails(K::Symmetric, f),
    },
    Claim {
        id: "d-2211-symmetric",
        statement: "local reversible with q = 2 and D = (2,2,1,1) implies symmetric",
        applies: |f| f.local_reversible() && f.q_is_2() && f.d() == [2, 2, 1, 1],
        check: |f| fails(K::Symmetric, f),
    },
    Claim {
        id: "order-below-256",
        statement: "no ring of order below 256 is reversible and nonsymmetric",
        applies: |f| f.order < 256,
        check: |f| implication(f, K::Reversible, K::Symmetric),
    },
    Claim {
        id: "reduced-implies-symmetric",
        statement: "reduced implies symmetric",
        applies: |_| true,
        check: |f| implication(f, K::Reduced, K::Symmetric),
    },
    Claim {
        id: "commutative-implies-symmetric",
        statement: "commutative implies symmetric",
        applies: |_| true,
        check: |f| implication(f, K::Commutative, K::Symmetric),
    },
    Claim {
        id: "symmetric-implies-reversible",
        statement: "symmetric implies reversible",
        applies: |_| true,
        check: |f| implication(f, K::Symmetric, K::Reversible),
    },
    Claim {
        id: "reversible-implies-semicommutative",
        statement: "reversible implies semicommutative",
        applies: |_| true,
        check: |f| implication(f, K::Reversible, K::Semicommutative),
    },
    Claim {
        id: "semicommutative-implies-two-primal",
        statement: "semicommutative implies 2-primal",
        applies: |_| true,
        check: |f| implication(f, K::Semicommutative, K::TwoPrimal),
    },
    Claim {
        id: "reversible-iff-semicommutative-reflexive",
        statement: "reversible if and only if semicommutative and reflexive",
        applies: |_| true,
        check: |f| {
            let both = f.holds(K::Semicommutative) && f.holds(K::Reflexive);
            match (f.holds(K::Reversible), both) {
                (true, false) => fails(K::Semicommutative, f).or_else(|| fails(K::Reflexive, f)),
                (false, true) => fails(K::Reversible, f),
                _ => None,
            }
        },
    },
];

fn render_witness(ring: &FiniteRing, kind: PropertyKind, w: &[Element]) -> WitnessRecord {
    WitnessRecord {
        property: kind.to_string(),
        coefficients: w.iter().map(|x| x.0.clone()).collect(),
        rendered: w.iter().map(|x| ring.render(x)).collect(),
    }
}

/// Recomputes the facts with the exhaustive backend and re-runs the claim;
/// a witness must also replay through multiplication.
fn replay(claim: &Claim, ring: &FiniteRing, facts: &RingFacts, failure: &Failure) -> Result<bool, RingError> {
    let mut again = facts.clone();
    again.properties = properties::profile(ring, Backend::Exhaustive)?;
    let reproduced = (claim.applies)(&again) && (claim.check)(&again).is_some();
    let witness_ok = match failure.property {
        Some(kind) => facts.result(kind).witness.as_ref().is_some_and(|w| properties::replay(ring, kind, w)),
        None => true,
    };
    Ok(reproduced && witness_ok)
}

/// Evaluates every claim on every corpus ring.
pub fn statement_audit(corpus: &[CorpusRing]) -> Result<AuditReport, RingError> {
    let facts = corpus.iter().map(|c| RingFacts::compute(&c.name, &c.ring)).collect::<Result<Vec<_>, _>>()?;
    audit_facts(corpus, &facts)
}

/// As [`statement_audit`], reusing precomputed facts (same order as `corpus`).
pub fn audit_facts(corpus: &[CorpusRing], facts: &[RingFacts]) -> Result<AuditReport, RingError> {
    let mut claims = Vec::with_capacity(CLAIMS.len());
    for claim in CLAIMS {
        let mut tested = Vec::new();
        let mut counterexamples = Vec::new();
        for (c, f) in corpus.iter().zip(facts) {
            if !(claim.applies)(f) {
                continue;
            }
            tested.push(f.name.clone());
            if let Some(failure) = (claim.check)(f) {
                let witness =
                    failure.property.and_then(|k| f.result(k).witness.as_ref().map(|w| render_witness(&c.ring, k, w)));
                counterexamples.push(Counterexample {
                    ring: f.name.clone(),
                    replayed: replay(claim, &c.ring, f, &failure)?,
                    detail: failure.detail,
                    witness,
                });
            }
        }
        let verdict = if tested.is_empty() {
            Verdict::Vacuous
        } else if counterexamples.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        claims.push(ClaimResult { id: claim.id, statement: claim.statement, tested, verdict, counterexamples });
    }
    let mut notes = Vec::new();
    for (c, f) in corpus.iter().zip(facts) {
        let d = f.d();
        if (CLAIMS[2].applies)(f) && d[1..].iter().any(|&x| x != 1) {
            notes.push(format!("{}: d2 = 1 but D = {d:?} is not constant 1 from d2 on", f.name));
        }
        if f.d2_one_shape() && !(CLAIMS[2].applies)(f) && !f.holds(K::Commutative) {
            let w = f.result(K::Commutative).witness.as_ref().map(|w| render_witness(&c.ring, K::Commutative, w));
            notes.push(format!(
                "{}: D = {d:?}, q = {}, J^3 {} 0 and noncommutative{}; outside the standing hypotheses of d2-one-commutative",
                f.name,
                f.residue_field_order.unwrap_or(0),
                if f.radical_cube_zero { "=" } else { "!=" },
                w.map_or(String::new(), |w| format!(" (witness {})", w.rendered.join(", "))),
            ));
        }
    }
    let mut report = AuditReport {
        banner: BANNER,
        rings: facts.iter().map(|f| f.name.clone()).collect(),
        claims,
        notes,
        digest: String::new(),
    };
    let body = serde_json::to_vec(&(&report.rings, &report.claims, &report.notes)).expect("serializable");
    report.digest = format!("{:x}", Sha256::digest(&body));
    Ok(report)
}

impl AuditReport {
    pub fn has_failures(&self) -> bool {
        self.claims.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Plain-text table, one claim per line.
    pub fn to_table(&self) -> String {
        let width = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = format!("{}\n{} rings\n\n", self.banner, self.rings.len());
        for c in &self.claims {
            out.push_str(&format!(
                "{:<width$}  {:<7}  {:>3} tested  {}\n",
                c.id,
                c.verdict,
                c.tested.len(),
                c.statement
            ));
            for x in &c.counterexamples {
                out.push_str(&format!("    counterexample {}: {} (replayed: {})\n", x.ring, x.detail, x.replayed));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("digest {}\n", self.digest));
        out
    }
}

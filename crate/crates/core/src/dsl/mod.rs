//! Text syntax for rings and elements.
//!
//! ```text
//! expr   := 'prod(' expr ',' expr ')' | 'op(' expr ')' | 'load(' path ')' | galg | pres
//! galg   := 'F' nat '[' ('Q8' | 'S3' | 'D4' | 'C' nat) ']'
//! pres   := 'F' nat '<' id {',' id} '>' '/' '(' [poly {',' poly}] ')'
//! poly   := ['-'] mono {('+' | '-') mono}
//! mono   := nat | [nat ['*']] factor {['*'] factor}
//! factor := id ['^' nat]
//! ```
//!
//! Juxtaposed single-letter generators may share one identifier: with
//! generators `u, v`, `vu^2` reads as `v*u^2`.

mod parser;

use std::fmt;
use std::path::{Path, PathBuf};

pub use parser::ParseError;

use crate::construct::{self, free_quotient, n_max_from_env, BuildError, Presentation, PresentedRing};
use crate::ring::{Element, FiniteRing, RingError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    GroupAlgebra { p: u64, group: String },
    FreeQuotient { p: u64, gens: Vec<String>, relations: Vec<PolyExpr> },
    Prod(Box<RingExpr>, Box<RingExpr>),
    Op(Box<RingExpr>),
    Load(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExpr {
    pub terms: Vec<TermExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermExpr {
    pub negative: bool,
    pub coeff: Option<u64>,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub exp: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("relation {relation}: unknown generator `{name}`")]
    UnknownGenerator { name: String, relation: usize },
    #[error("unknown element name `{0}`")]
    UnknownElement(String),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub fn parse_ring_expr(text: &str) -> Result<RingExpr, ParseError> {
    let mut p = parser::Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_poly(text: &str) -> Result<PolyExpr, ParseError> {
    let mut p = parser::Parser::new(text);
    let e = p.poly()?;
    p.finish()?;
    Ok(e)
}

/// Comma-separated polynomials, as used for generator images.
pub fn parse_poly_list(text: &str) -> Result<Vec<PolyExpr>, ParseError> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices().chain([(text.len(), ',')]) {
        if c == ',' {
            let piece = &text[start..i];
            let poly = parse_poly(piece).map_err(|e| ParseError { pos: e.pos + start, msg: e.msg })?;
            out.push(poly);
            start = i + 1;
        }
    }
    Ok(out)
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            Some(e) => write!(f, "{}^{e}", self.name),
            None => f.write_str(&self.name),
        }
    }
}

impl TermExpr {
    fn fmt_body(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        match (self.coeff, factors.is_empty()) {
            (Some(c), true) => write!(f, "{c}"),
            (Some(c), false) => write!(f, "{c}*{}", factors.join("*")),
            (None, _) => f.write_str(&factors.join("*")),
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            t.fmt_body(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::GroupAlgebra { p, group } => write!(f, "F{p}[{group}]"),
            RingExpr::FreeQuotient { p, gens, relations } => {
                let rels: Vec<String> = relations.iter().map(PolyExpr::to_string).collect();
                write!(f, "F{p}<{}>/({})", gens.join(","), rels.join(", "))
            }
            RingExpr::Prod(a, b) => write!(f, "prod({a}, {b})"),
            RingExpr::Op(a) => write!(f, "op({a})"),
            RingExpr::Load(path) => write!(f, "load({path})"),
        }
    }
}

/// Splits an identifier into names from `known`: the whole identifier if
/// it is known, otherwise one name per character.
fn resolve_names(name: &str, known: &[String]) -> Option<Vec<usize>> {
    if let Some(i) = known.iter().position(|k| k == name) {
        return Some(vec![i]);
    }
    name.chars().map(|c| known.iter().position(|k| k.chars().eq(std::iter::once(c)))).collect()
}

impl TermExpr {
    /// The term as a signed coefficient and a word of generator indices.
    fn to_word(&self, gens: &[String]) -> Result<(i64, Vec<usize>), String> {
        let mut word = Vec::new();
        for fac in &self.factors {
            let mut seq = resolve_names(&fac.name, gens).ok_or_else(|| fac.name.clone())?;
            // The exponent binds to the last letter of a juxtaposed run.
            let last = seq.pop().expect("nonempty identifier");
            word.extend(seq);
            for _ in 0..fac.exp.unwrap_or(1) {
                word.push(last);
            }
        }
        let c = self.coeff.unwrap_or(1) as i64;
        Ok((if self.negative { -c } else { c }, word))
    }
}

/// Presentation of a `FreeQuotient` expression.
pub fn presentation(p: u64, gens: &[String], relations: &[PolyExpr], n_max: usize) -> Result<Presentation, DslError> {
    let mut rels = Vec::with_capacity(relations.len());
    for (k, poly) in relations.iter().enumerate() {
        let terms = poly
            .terms
            .iter()
            .map(|t| t.to_word(gens))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|name| DslError::UnknownGenerator { name, relation: k + 1 })?;
        rels.push(terms);
    }
    Ok(Presentation::new(p, gens.to_vec(), rels, n_max)?)
}

/// A built ring, plus its presentation data when it came from one.
#[derive(Clone, Debug)]
pub struct Built {
    pub ring: FiniteRing,
    pub presented: Option<PresentedRing>,
}

impl Built {
    pub fn saturation_degree(&self) -> Option<usize> {
        self.presented.as_ref().map(|p| p.saturation_degree)
    }

    pub fn warnings(&self) -> &[String] {
        self.presented.as_ref().map_or(&[], |p| p.warnings())
    }

    /// Evaluates an element expression: identifiers are generator names
    /// (for presented rings) or basis labels; bare numbers are multiples of 1.
    pub fn element(&self, poly: &PolyExpr) -> Result<Element, DslError> {
        let r = &self.ring;
        let labels: Vec<String> = (0..r.rank()).map(|i| r.label(i)).collect();
        let gen_names: &[String] = self.presented.as_ref().map_or(&[], |p| p.presentation.generators());
        let atom = |name: &str| -> Option<Vec<Element>> {
            if let Some(i) = gen_names.iter().position(|g| g == name) {
                return Some(vec![self.presented.as_ref().unwrap().generator_images[i].clone()]);
            }
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(vec![r.generator(i)]);
            }
            name.chars()
                .map(|c| {
                    let s = c.to_string();
                    gen_names
                        .iter()
                        .position(|g| *g == s)
                        .map(|i| self.presented.as_ref().unwrap().generator_images[i].clone())
                        .or_else(|| labels.iter().position(|l| *l == s).map(|i| r.generator(i)))
                })
                .collect()
        };
        let mut acc = r.zero();
        for t in &poly.terms {
            let mut term = r.one().clone();
            for fac in &t.factors {
                let mut seq = atom(&fac.name).ok_or_else(|| DslError::UnknownElement(fac.name.clone()))?;
                let last = seq.pop().expect("nonempty identifier");
                for x in seq {
                    term = r.mul(&term, &x);
                }
                for _ in 0..fac.exp.unwrap_or(1) {
                    term = r.mul(&term, &last);
                }
            }
            let c = t.coeff.unwrap_or(1);
            term = r.scale(c, &term);
            if t.negative {
                term = r.neg(&term);
            }
            acc = r.add(&acc, &term);
        }
        Ok(acc)
    }
}

/// Builds `expr`; `load` paths are taken relative to `base`.
pub fn eval(expr: &RingExpr, base: &Path) -> Result<Built, DslError> {
    eval_with(expr, &|path| {
        let full: PathBuf = base.join(path);
        std::fs::read_to_string(&full).map_err(|source| DslError::Io { path: full.display().to_string(), source })
    })
}

/// Builds `expr`, resolving `load(path)` to serialized ring text through `load`.
pub fn eval_with(expr: &RingExpr, load: &dyn Fn(&str) -> Result<String, DslError>) -> Result<Built, DslError> {
    match expr {
        RingExpr::GroupAlgebra { p, group } => {
            let g = construct::builtin_group(group)?;
            Ok(Built { ring: construct::group_algebra(*p, &g)?, presented: None })
        }
        RingExpr::FreeQuotient { p, gens, relations } => {
            let pres = presentation(*p, gens, relations, n_max_from_env())?;
            let q = free_quotient(&pres)?;
            Ok(Built { ring: q.ring.clone(), presented: Some(q) })
        }
        RingExpr::Prod(a, b) => {
            let (a, b) = (eval_with(a, load)?, eval_with(b, load)?);
            Ok(Built { ring: FiniteRing::direct_product(&a.ring, &b.ring)?, presented: None })
        }
        RingExpr::Op(a) => Ok(Built { ring: eval_with(a, load)?.ring.opposite(), presented: None }),
        RingExpr::Load(path) => Ok(Built { ring: FiniteRing::from_json(&load(path)?)?, presented: None }),
    }
}

/// Parses and builds, with `load` relative to the working directory.
pub fn build(text: &str) -> Result<Built, DslError> {
    eval(&parse_ring_expr(text)?, Path::new("."))
}

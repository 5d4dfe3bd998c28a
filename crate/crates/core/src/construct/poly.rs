use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use log::warn;

use super::BuildError;
use crate::ring::is_prime;

/// Word in the generators, compared degree-lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `u^2v`-style rendering; `*` joins factors once any name is longer
    /// than one character.
    pub fn render(&self, names: &[String]) -> String {
        let compact = names.iter().all(|n| n.chars().count() == 1);
        self.render_joined(names, if compact { "" } else { "*" })
    }

    /// Rendering with every factor joined by `*`.
    pub fn render_dsl(&self, names: &[String]) -> String {
        self.render_joined(names, "*")
    }

    fn render_joined(&self, names: &[String], sep: &str) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == g {
                run += 1;
            }
            let name = &names[g as usize];
            parts.push(if run == 1 { name.clone() } else { format!("{name}^{run}") });
            i += run;
        }
        parts.join(sep)
    }
}

/// Noncommutative polynomial over `F_p`; coefficients are kept nonzero and
/// reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, u32>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(p: u32, terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(p, w, c.rem_euclid(p as i64) as u32);
        }
        out
    }

    pub fn add_term(&mut self, p: u32, w: Word, c: u32) {
        let c = c % p;
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = (*o.get() + c) % p;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Word, u32)> {
        self.terms.iter().next_back().map(|(w, &c)| (w, c))
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Word, u32)> {
        self.terms.pop_last()
    }

    pub fn degree(&self) -> usize {
        self.leading().map_or(0, |(w, _)| w.len())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Word, u32> {
        self.terms
    }

    pub(crate) fn from_map(terms: BTreeMap<Word, u32>) -> Self {
        Self { terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::len);
        match lens.next() {
            Some(first) => lens.all(|l| l == first),
            None => true,
        }
    }

    /// Image of the polynomial under a permutation of generator indices.
    pub fn permuted(&self, p: u32, perm: &[u8]) -> NcPoly {
        NcPoly::from_terms(
            p,
            self.terms.iter().map(|(w, &c)| (Word(w.0.iter().map(|&g| perm[g as usize]).collect()), c as i64)),
        )
    }

    /// Terms from the largest word down, `u^2 + v*u`-style when `dsl`.
    pub fn render(&self, names: &[String], dsl: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(w, &c)| {
                let body = if dsl { w.render_dsl(names) } else { w.render(names) };
                match (c, w.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => body,
                    _ => format!("{c}*{body}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Generators and relations over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    p: u32,
    generators: Vec<String>,
    relations: Vec<NcPoly>,
    n_max: usize,
    warnings: Vec<String>,
}

impl Presentation {
    /// Relations come as `(coefficient, generator-index word)` term lists
    /// with integer coefficients, reduced mod `p` here. Relations that
    /// vanish mod `p` are dropped with a warning.
    pub fn new(
        p: u64,
        generators: Vec<String>,
        relations: Vec<Vec<(i64, Vec<usize>)>>,
        n_max: usize,
    ) -> Result<Self, BuildError> {
        if !is_prime(p) || p > u16::MAX as u64 {
            return Err(BuildError::NotPrime(p));
        }
        if generators.is_empty() {
            return Err(BuildError::NoGenerators);
        }
        if generators.len() > u8::MAX as usize {
            return Err(BuildError::Presentation("too many generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(BuildError::Presentation(format!("duplicate generator `{g}`")));
            }
        }
        let p = p as u32;
        let mut polys = Vec::new();
        let mut warnings = Vec::new();
        for (k, rel) in relations.into_iter().enumerate() {
            let mut terms = Vec::with_capacity(rel.len());
            for (c, w) in rel {
                if let Some(&bad) = w.iter().find(|&&g| g >= generators.len()) {
                    return Err(BuildError::Presentation(format!("generator index {bad} out of range")));
                }
                terms.push((Word(w.into_iter().map(|g| g as u8).collect()), c));
            }
            let poly = NcPoly::from_terms(p, terms);
            if poly.is_zero() {
                let msg = format!("relation {} vanishes mod {p} and was dropped", k + 1);
                warn!("{msg}");
                warnings.push(msg);
            } else {
                polys.push(poly);
            }
        }
        Ok(Self { p, generators, relations: polys, n_max, warnings })
    }

    pub fn from_polys(p: u32, generators: Vec<String>, relations: Vec<NcPoly>, n_max: usize) -> Self {
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Self { p, generators, relations, n_max, warnings: Vec::new() }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// DSL text that parses back to an equivalent presentation.
    pub fn to_dsl(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| r.render(&self.generators, true)).collect();
        format!("F{}<{}>/({})", self.p, self.generators.join(","), rels.join(", "))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["u".into(), "v".into()]
    }

    #[test]
    fn deglex_orders_by_length_then_lex() {
        let w = |s: &[u8]| Word(s.to_vec());
        assert!(w(&[1, 1]) > w(&[1, 0]));
        assert!(w(&[0, 0, 0]) > w(&[1, 1]));
        assert!(w(&[1]) > w(&[0]));
    }

    #[test]
    fn coefficients_reduce_and_cancel() {
        let p = NcPoly::from_terms(2, [(Word(vec![0]), 1), (Word(vec![0]), 1), (Word(vec![1]), 3)]);
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.leading(), Some((&Word(vec![1]), 1)));
        let q = NcPoly::from_terms(3, [(Word(vec![0]), -1)]);
        assert_eq!(q.leading().unwrap().1, 2);
    }

    #[test]
    fn zero_relations_are_dropped_with_warning() {
        let pres = Presentation::new(2, names(), vec![vec![(2, vec![0, 0])], vec![(1, vec![1])]], 12).unwrap();
        assert_eq!(pres.relations().len(), 1);
        assert_eq!(pres.warnings().len(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Presentation::new(6, names(), vec![], 12), Err(BuildError::NotPrime(6))));
        assert!(matches!(Presentation::new(2, vec![], vec![], 12), Err(BuildError::NoGenerators)));
    }

    #[test]
    fn rendering() {
        let w = Word(vec![1, 0, 0]);
        assert_eq!(w.render(&names()), "vu^2");
        let p = NcPoly::from_terms(2, [(Word(vec![1, 0, 0]), 1), (Word(vec![0, 1, 0]), 1)]);
        assert_eq!(p.render(&names(), true), "v*u^2 + u*v*u");
        assert_eq!(p.render(&names(), false), "vu^2 + uvu");
    }
}

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use log::debug;

use super::poly::{NcPoly, Presentation, Word};
use super::BuildError;
use crate::ring::{Element, FiniteRing, RingData, MAX_ORDER};

/// Degree cap used when none is given.
pub const DEFAULT_N_MAX: usize = 12;

/// `DEFAULT_N_MAX`, unless `RINGFORGE_NMAX` holds a positive integer.
pub fn n_max_from_env() -> usize {
    std::env::var("RINGFORGE_NMAX")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(DEFAULT_N_MAX)
}

// Normal-word enumeration gives up beyond this many words.
const WORD_BUDGET: usize = 1 << 16;

/// Finite quotient of a free algebra together with its normal-word basis.
#[derive(Clone, Debug)]
pub struct PresentedRing {
    pub ring: FiniteRing,
    pub presentation: Presentation,
    /// Basis words, in increasing deglex order; index `i` is coordinate `i`.
    pub normal_words: Vec<Word>,
    /// Image of each generator in the basis.
    pub generator_images: Vec<Element>,
    /// Least truncation degree at which the basis was certified.
    pub saturation_degree: usize,
}

impl PresentedRing {
    pub fn warnings(&self) -> &[String] {
        self.presentation.warnings()
    }

    /// Evaluates a polynomial in the generators.
    pub fn evaluate(&self, poly: &NcPoly) -> Element {
        let r = &self.ring;
        let mut acc = r.zero();
        for (w, c) in poly.terms() {
            let mut term = r.one().clone();
            for &g in &w.0 {
                term = r.mul(&term, &self.generator_images[g as usize]);
            }
            acc = r.add(&acc, &r.scale(c as u64, &term));
        }
        acc
    }
}

struct Rule {
    lead: Vec<u8>,
    tail: Vec<(Vec<u8>, u32)>,
    active: bool,
}

struct Completion {
    p: u32,
    rules: Vec<Rule>,
    queue: BinaryHeap<Reverse<(usize, usize, usize, usize)>>,
    degenerate: bool,
}

fn find_sub(hay: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

fn inv(a: u32, p: u32) -> u32 {
    crate::linalg::inv_mod(a, p)
}

impl Completion {
    fn new(p: u32) -> Self {
        Self { p, rules: Vec::new(), queue: BinaryHeap::new(), degenerate: false }
    }

    fn divisor(&self, w: &[u8]) -> Option<(usize, usize)> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.active)
            .find_map(|(i, r)| find_sub(w, &r.lead).map(|pos| (i, pos)))
    }

    fn reduce(&self, terms: BTreeMap<Word, u32>) -> BTreeMap<Word, u32> {
        let p = self.p;
        let mut work = NcPoly::from_map(terms);
        let mut out = BTreeMap::new();
        while let Some((w, c)) = work.pop_leading() {
            match self.divisor(&w.0) {
                Some((i, pos)) => {
                    let rule = &self.rules[i];
                    let (pre, post) = (&w.0[..pos], &w.0[pos + rule.lead.len()..]);
                    for (tw, tc) in &rule.tail {
                        let mut word = Vec::with_capacity(pre.len() + tw.len() + post.len());
                        word.extend_from_slice(pre);
                        word.extend_from_slice(tw);
                        word.extend_from_slice(post);
                        let coeff = (p - tc) as u64 * c as u64 % p as u64;
                        work.add_term(p, Word(word), coeff as u32);
                    }
                }
                None => {
                    out.insert(w, c);
                }
            }
        }
        out
    }

    fn add(&mut self, poly: BTreeMap<Word, u32>) {
        let mut pending = vec![poly];
        while let Some(next) = pending.pop() {
            let reduced = self.reduce(next);
            let Some((lead, lc)) = reduced.iter().next_back().map(|(w, &c)| (w.clone(), c)) else {
                continue;
            };
            if lead.is_empty() {
                self.degenerate = true;
                return;
            }
            let scale = inv(lc, self.p) as u64;
            let tail = reduced
                .iter()
                .rev()
                .skip(1)
                .map(|(w, &c)| (w.0.clone(), (c as u64 * scale % self.p as u64) as u32))
                .collect();
            let idx = self.rules.len();
            for (i, r) in self.rules.iter_mut().enumerate() {
                if r.active && find_sub(&r.lead, &lead.0).is_some() {
                    r.active = false;
                    let mut m = BTreeMap::new();
                    m.insert(Word(r.lead.clone()), 1);
                    for (w, c) in &r.tail {
                        m.insert(Word(w.clone()), *c);
                    }
                    debug!("rule {i} superseded");
                    pending.push(m);
                }
            }
            self.rules.push(Rule { lead: lead.0, tail, active: true });
            for j in 0..=idx {
                if self.rules[j].active {
                    self.push_overlaps(idx, j);
                    if j != idx {
                        self.push_overlaps(j, idx);
                    }
                }
            }
        }
    }

    fn push_overlaps(&mut self, a: usize, b: usize) {
        let (la, lb) = (&self.rules[a].lead, &self.rules[b].lead);
        for k in 1..la.len().min(lb.len()) {
            if la[la.len() - k..] == lb[..k] {
                self.queue.push(Reverse((la.len() + lb.len() - k, a, b, k)));
            }
        }
    }

    fn process_up_to(&mut self, n: usize) {
        while let Some(&Reverse((deg, a, b, k))) = self.queue.peek() {
            if deg > n || self.degenerate {
                break;
            }
            self.queue.pop();
            if !self.rules[a].active || !self.rules[b].active {
                continue;
            }
            let p = self.p;
            let (ra, rb) = (&self.rules[a], &self.rules[b]);
            let c = &rb.lead[k..];
            let a_pre = &ra.lead[..ra.lead.len() - k];
            // a*C - A'*b; the common leading word cancels.
            let mut s = NcPoly::zero();
            for (w, coeff) in &ra.tail {
                s.add_term(p, Word([w.as_slice(), c].concat()), *coeff);
            }
            for (w, coeff) in &rb.tail {
                s.add_term(p, Word([a_pre, w.as_slice()].concat()), p - coeff);
            }
            self.add(s.into_terms());
        }
    }

    /// Normal words of length at most `n`, and whether every word of
    /// length `n` is reducible. Stops early once more than `cap` are found.
    fn normal_words(&self, gens: usize, n: usize, cap: usize) -> (Vec<Word>, bool) {
        let leads: Vec<&[u8]> = self.rules.iter().filter(|r| r.active).map(|r| r.lead.as_slice()).collect();
        let mut all = vec![Word::empty()];
        let mut level = vec![Vec::<u8>::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &level {
                for g in 0..gens as u8 {
                    let mut cand = w.clone();
                    cand.push(g);
                    if !leads.iter().any(|l| cand.ends_with(l)) {
                        next.push(cand);
                    }
                }
            }
            if next.is_empty() {
                return (all, true);
            }
            all.extend(next.iter().cloned().map(Word));
            if all.len() > cap {
                return (all, false);
            }
            level = next;
        }
        (all, false)
    }
}

type Matrix = Vec<Vec<u32>>;

fn apply(m: &Matrix, v: &[u32], p: u32) -> Vec<u32> {
    m.iter().map(|row| (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p as u64) as u32).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, p: u32) -> Matrix {
    let n = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| ((0..n).map(|k| row[k] as u64 * b[k][j] as u64).sum::<u64>() % p as u64) as u32).collect()
        })
        .collect()
}

/// Builds the quotient of `F_p<X>` by the two-sided ideal of the relations.
///
/// Runs a degree-truncated completion for `N = 1, 2, ...` up to the
/// presentation's cap. Once every word of length `N` is reducible, the
/// candidate basis is certified by checking that each relation annihilates
/// the left regular action on it; a failed check moves on to `N + 1`.
pub fn free_quotient(pres: &Presentation) -> Result<PresentedRing, BuildError> {
    build(pres, None)
}

/// As [`free_quotient`], failing with `TooLarge` once a certified basis
/// has more than `max_words` words.
pub fn free_quotient_capped(pres: &Presentation, max_words: usize) -> Result<PresentedRing, BuildError> {
    build(pres, Some(max_words))
}

// Largest basis certified only to prove a quotient too large.
const CERTIFY_LIMIT: usize = 1 << 10;

fn build(pres: &Presentation, cap: Option<usize>) -> Result<PresentedRing, BuildError> {
    let p = pres.prime();
    let gens = pres.generators().len();
    let order_cap = (MAX_ORDER as f64).log(p as f64).floor() as usize;
    let limit = cap.map_or(order_cap, |c| c.min(order_cap));
    let mut comp = Completion::new(p);
    for r in pres.relations() {
        comp.add(r.clone().into_terms());
        if comp.degenerate {
            return Err(BuildError::Degenerate);
        }
    }
    for n in 1..=pres.n_max() {
        comp.process_up_to(n);
        if comp.degenerate {
            return Err(BuildError::Degenerate);
        }
        let (words, saturated) = comp.normal_words(gens, n, WORD_BUDGET);
        if !saturated {
            continue;
        }
        if words.len() > limit {
            // Saturated words span; certified ones are also independent.
            if words.len() <= CERTIFY_LIMIT && operators(pres, &comp, &words, n)?.is_some() {
                return Err(BuildError::TooLarge { words: words.len() });
            }
            debug!("degree {n}: {} spanning words, not certified", words.len());
            continue;
        }
        if let Some(ring) = certify(pres, &comp, &words, n)? {
            return Ok(ring);
        }
        debug!("degree {n}: candidate basis of {} words rejected", words.len());
    }
    Err(BuildError::NotSaturated { n_max: pres.n_max() })
}

/// Left multiplication by each generator on the span of `words`, when
/// every relation acts as zero there.
fn operators(
    pres: &Presentation,
    comp: &Completion,
    words: &[Word],
    n: usize,
) -> Result<Option<Vec<Matrix>>, BuildError> {
    let p = pres.prime();
    let m = words.len();
    let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.0.as_slice(), i)).collect();
    let to_vec = |terms: BTreeMap<Word, u32>| -> Result<Vec<u32>, BuildError> {
        let mut v = vec![0; m];
        for (w, c) in terms {
            let &i = index
                .get(w.0.as_slice())
                .ok_or_else(|| BuildError::Presentation(format!("normal form left the basis at degree {n}")))?;
            v[i] = c;
        }
        Ok(v)
    };
    let nf = |w: Vec<u8>| to_vec(comp.reduce(BTreeMap::from([(Word(w), 1)])));

    // ops[g] column j = NF(g * b_j).
    let mut ops: Vec<Matrix> = Vec::with_capacity(pres.generators().len());
    for g in 0..pres.generators().len() as u8 {
        let mut mat = vec![vec![0; m]; m];
        for (j, b) in words.iter().enumerate() {
            let col = nf([&[g][..], &b.0].concat())?;
            for (i, &c) in col.iter().enumerate() {
                mat[i][j] = c;
            }
        }
        ops.push(mat);
    }
    for rel in pres.relations() {
        for j in 0..m {
            let mut e = vec![0; m];
            e[j] = 1;
            let mut total = vec![0u64; m];
            for (w, c) in rel.terms() {
                let mut v = e.clone();
                for &g in w.0.iter().rev() {
                    v = apply(&ops[g as usize], &v, p);
                }
                for (t, x) in total.iter_mut().zip(v) {
                    *t += c as u64 * x as u64;
                }
            }
            if total.iter().any(|&t| t % p as u64 != 0) {
                return Ok(None);
            }
        }
    }
    Ok(Some(ops))
}

fn certify(
    pres: &Presentation,
    comp: &Completion,
    words: &[Word],
    n: usize,
) -> Result<Option<PresentedRing>, BuildError> {
    let Some(ops) = operators(pres, comp, words, n)? else { return Ok(None) };
    let p = pres.prime();
    let m = words.len();
    let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.0.as_slice(), i)).collect();

    // Words are factor-closed and sorted by length, so b = g * b' has b'
    // earlier in the list.
    let mut word_ops: Vec<Matrix> = Vec::with_capacity(m);
    for w in words {
        let mat = match w.0.split_first() {
            None => (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect(),
            Some((&g, rest)) => mat_mul(&ops[g as usize], &word_ops[index[rest]], p),
        };
        word_ops.push(mat);
    }
    let constants =
        word_ops.iter().map(|mat| (0..m).map(|j| mat.iter().map(|row| row[j]).collect()).collect()).collect();
    let mut one = vec![0; m];
    one[0] = 1;
    let labels = words.iter().map(|w| w.render(pres.generators())).collect();
    let ring = FiniteRing::from_data(RingData { moduli: vec![p; m], constants, one, labels: Some(labels) })?;
    // g = g * 1, the first column of its operator.
    let generator_images = ops.iter().map(|op| Element(op.iter().map(|row| row[0]).collect())).collect();
    Ok(Some(PresentedRing {
        ring,
        presentation: pres.clone(),
        normal_words: words.to_vec(),
        generator_images,
        saturation_degree: n,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(p: u64, gens: &[&str], rels: Vec<Vec<(i64, Vec<usize>)>>) -> Presentation {
        Presentation::new(p, gens.iter().map(|s| s.to_string()).collect(), rels, DEFAULT_N_MAX).unwrap()
    }

    #[test]
    fn truncated_polynomial_ring() {
        let q = free_quotient(&pres(2, &["x"], vec![vec![(1, vec![0; 4])]])).unwrap();
        assert_eq!(q.ring.order(), 16);
        assert_eq!(q.saturation_degree, 4);
        let x = &q.generator_images[0];
        let x2 = q.ring.mul(x, x);
        assert!(q.ring.mul(&x2, &x2).is_zero());
    }

    #[test]
    fn relations_vanish_in_quotient() {
        // u^2 = v^2 = 0, uv = vu over F3.
        let rels = vec![vec![(1, vec![0, 0])], vec![(1, vec![1, 1])], vec![(1, vec![0, 1]), (-1, vec![1, 0])]];
        let q = free_quotient(&pres(3, &["u", "v"], rels)).unwrap();
        assert_eq!(q.ring.order(), 81);
        for r in q.presentation.relations() {
            assert!(q.evaluate(r).is_zero());
        }
    }

    #[test]
    fn inhomogeneous_field_extension() {
        // F2[x]/(x^2 + x + 1) = F4.
        let rels = vec![vec![(1, vec![0, 0]), (1, vec![0]), (1, vec![])]];
        let q = free_quotient(&pres(2, &["x"], rels)).unwrap();
        assert_eq!(q.ring.order(), 4);
        let nonzero_units = q
            .ring
            .elements()
            .filter(|x| !x.is_zero())
            .all(|x| q.ring.elements().any(|y| q.ring.mul(&x, &y) == *q.ring.one()));
        assert!(nonzero_units);
    }

    #[test]
    fn free_algebra_does_not_saturate() {
        let p = pres(2, &["x", "y"], vec![vec![(1, vec![0, 0])]]).with_n_max(5);
        assert!(matches!(free_quotient(&p), Err(BuildError::NotSaturated { n_max: 5 })));
    }

    #[test]
    fn unit_relation_is_degenerate() {
        let p = pres(2, &["x"], vec![vec![(1, vec![0]), (1, vec![])], vec![(1, vec![0])]]);
        assert!(matches!(free_quotient(&p), Err(BuildError::Degenerate)));
    }

    #[test]
    fn overlaps_are_resolved() {
        // x y = y,  y x = x  forces x = x^2 ... finite quotient once y^2 = 0.
        let rels =
            vec![vec![(1, vec![0, 1]), (1, vec![1])], vec![(1, vec![1, 0]), (1, vec![0])], vec![(1, vec![1, 1])]];
        let q = free_quotient(&pres(2, &["x", "y"], rels)).unwrap();
        for r in q.presentation.relations() {
            assert!(q.evaluate(r).is_zero());
        }
    }

    fn swapped_232() -> Presentation {
        let rels = vec![
            vec![(1, vec![1, 1, 0]), (1, vec![1, 1]), (1, vec![0, 1]), (1, vec![0, 0])],
            vec![(1, vec![1, 1, 1])],
            vec![(1, vec![0, 1, 1]), (1, vec![0, 0, 1])],
            vec![(1, vec![1, 0, 1]), (1, vec![0, 1, 1]), (1, vec![0, 1, 0])],
        ];
        pres(2, &["u", "v"], rels).with_n_max(8)
    }

    #[test]
    fn capped_build_matches_uncapped() {
        let q = free_quotient_capped(&swapped_232(), 8).unwrap();
        assert_eq!(q.ring.order(), 256);
        assert_eq!(free_quotient(&swapped_232()).unwrap().ring.order(), 256);
        assert!(matches!(free_quotient_capped(&swapped_232(), 7), Err(BuildError::TooLarge { words: 8 })));
    }

    #[test]
    fn cap_reports_certified_word_count() {
        let rels = vec![
            vec![(1, vec![0, 0, 0])],
            vec![(1, vec![1, 1, 1])],
            vec![(1, vec![0, 0]), (1, vec![1, 1]), (1, vec![1, 0])],
            vec![(1, vec![1, 0, 0]), (1, vec![0, 1, 0]), (1, vec![1, 0, 1])],
        ];
        let p = pres(2, &["u", "v"], rels);
        assert_eq!(free_quotient(&p).unwrap().ring.order(), 512);
        assert!(matches!(free_quotient_capped(&p, 8), Err(BuildError::TooLarge { words: 9 })));
    }
}

//! Additive subgroups of a finite ring, as membership bitsets plus a small
//! generating set.

use crate::linalg::Subspace;
use crate::ring::{Element, FiniteRing};

/// Fixed-size bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSet {
    len: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn new(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// Additive subgroup of a ring. For `F_p`-algebras the generators are a
/// reduced echelon basis of the corresponding subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Element>,
    members: ElementSet,
}

impl Subgroup {
    pub fn trivial(ring: &FiniteRing) -> Self {
        let mut members = ElementSet::new(ring.order());
        members.insert(0);
        Self { generators: Vec::new(), members }
    }

    pub fn whole(ring: &FiniteRing) -> Self {
        Self::generated_by(ring, ring.generators())
    }

    /// Subgroup generated by `candidates`.
    pub fn generated_by(ring: &FiniteRing, candidates: impl IntoIterator<Item = Element>) -> Self {
        if let Some(p) = ring.prime_field() {
            let space = Subspace::span(p, ring.rank(), candidates.into_iter().map(|e| e.0));
            return Self::from_subspace(ring, &space);
        }
        let mut members = ElementSet::new(ring.order());
        members.insert(0);
        let mut listed = vec![0usize];
        let mut generators = Vec::new();
        let mut gen_idx = Vec::new();
        for g in candidates {
            let gi = ring.index(&g);
            if members.contains(gi) {
                continue;
            }
            generators.push(g);
            gen_idx.push(gi);
            let mut i = 0;
            while i < listed.len() {
                for &h in &gen_idx {
                    let y = ring.add_idx(listed[i], h);
                    if members.insert(y) {
                        listed.push(y);
                    }
                }
                i += 1;
            }
        }
        Self { generators, members }
    }

    pub fn from_subspace(ring: &FiniteRing, space: &Subspace) -> Self {
        let p = space.prime() as usize;
        let generators: Vec<Element> = space.basis().iter().map(|v| Element(v.clone())).collect();
        let mut members = ElementSet::new(ring.order());
        members.insert(0);
        let mut listed = vec![0usize];
        for g in &generators {
            let gi = ring.index(g);
            let base = listed.clone();
            let mut shifted = base.clone();
            for _ in 1..p {
                shifted = shifted.iter().map(|&x| ring.add_idx(x, gi)).collect();
                for &y in &shifted {
                    members.insert(y);
                }
                listed.extend_from_slice(&shifted);
            }
        }
        Self { generators, members }
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn size(&self) -> usize {
        self.members.count()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(index)
    }

    pub fn contains_element(&self, ring: &FiniteRing, x: &Element) -> bool {
        self.contains(ring.index(x))
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset_of(&other.members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingData;

    fn z4_times_z2() -> FiniteRing {
        let a = FiniteRing::from_data(RingData {
            moduli: vec![4],
            constants: vec![vec![vec![1]]],
            one: vec![1],
            labels: None,
        })
        .unwrap();
        let b = FiniteRing::from_data(RingData {
            moduli: vec![2],
            constants: vec![vec![vec![1]]],
            one: vec![1],
            labels: None,
        })
        .unwrap();
        FiniteRing::direct_product(&a, &b).unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = ElementSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(s.count(), 2);
    }

    #[test]
    fn generated_subgroups_in_mixed_moduli() {
        let r = z4_times_z2();
        let two = Element(vec![2, 0]);
        let s = Subgroup::generated_by(&r, [two.clone()]);
        assert_eq!(s.size(), 2);
        let t = Subgroup::generated_by(&r, [Element(vec![1, 1]), two.clone()]);
        // <(1,1)> already has order 4 and contains (2,0).
        assert_eq!(t.size(), 4);
        assert_eq!(t.generators().len(), 1);
        let u = Subgroup::generated_by(&r, [two, Element(vec![0, 1])]);
        assert_eq!(u.size(), 4);
        assert_eq!(Subgroup::whole(&r).size(), 8);
    }

    #[test]
    fn size_divides_order() {
        let r = z4_times_z2();
        for i in 0..r.order() {
            let s = Subgroup::generated_by(&r, [r.element(i)]);
            assert_eq!(r.order() % s.size(), 0);
        }
    }
}

//! Units, Jacobson radical and its powers, socles, localness, the
//! D-sequence, and idempotents.

use serde::Serialize;

use crate::linalg::{operator_matrix, Side};
use crate::ring::{log_exact, Element, FiniteRing, RingError};
use crate::subgroup::{ElementSet, Subgroup};

/// Set of units. `F_p`-algebras use invertibility of `L_x`; other rings a
/// scan for a right inverse (one-sided inverses are two-sided in finite rings).
pub fn units(ring: &FiniteRing) -> ElementSet {
    let n = ring.order();
    let mut set = ElementSet::new(n);
    if ring.prime_field().is_some() && !ring.has_table() {
        for i in 0..n {
            let x = ring.element(i);
            let m = operator_matrix(ring, &x, Side::Left).expect("prime field checked");
            if m.rank() == ring.rank() {
                set.insert(i);
            }
        }
        return set;
    }
    let one = ring.one_idx();
    for x in 0..n {
        if (0..n).any(|y| ring.mul_idx(x, y) == one) {
            set.insert(x);
        }
    }
    set
}

/// Exhaustive two-sided inverse scan, independent of the linear shortcut.
pub fn units_by_scan(ring: &FiniteRing) -> ElementSet {
    let n = ring.order();
    let one = ring.one_idx();
    let mut set = ElementSet::new(n);
    for x in 0..n {
        if (0..n).any(|y| ring.mul_idx(x, y) == one && ring.mul_idx(y, x) == one) {
            set.insert(x);
        }
    }
    set
}

/// `J = {x : 1 - r x is a unit for every r}`.
pub fn jacobson_radical(ring: &FiniteRing) -> Subgroup {
    jacobson_with_units(ring, &units(ring))
}

fn jacobson_with_units(ring: &FiniteRing, units: &ElementSet) -> Subgroup {
    let n = ring.order();
    let one = ring.one_idx();
    let members = (0..n)
        .filter(|&x| !units.contains(x))
        .filter(|&x| (0..n).all(|r| units.contains(ring.sub_idx(one, ring.mul_idx(r, x)))));
    let gens: Vec<Element> = members.map(|i| ring.element(i)).collect();
    Subgroup::generated_by(ring, gens)
}

/// Additive span of all products `a b` with `a` from `x`, `b` from `y`.
pub fn product_span(ring: &FiniteRing, x: &Subgroup, y: &Subgroup) -> Subgroup {
    let mut prods = Vec::with_capacity(x.generators().len() * y.generators().len());
    for a in x.generators() {
        for b in y.generators() {
            prods.push(ring.mul(a, b));
        }
    }
    Subgroup::generated_by(ring, prods)
}

/// `[J, J^2, ..., J^k]` with `J^k = 0`, and the index `k`.
pub fn radical_chain(ring: &FiniteRing, radical: &Subgroup) -> Result<(Vec<Subgroup>, usize), RingError> {
    let mut chain = vec![radical.clone()];
    while !chain.last().unwrap().is_trivial() {
        if chain.len() > ring.order() {
            return Err(RingError::Internal("radical powers did not reach zero".into()));
        }
        let next = product_span(ring, chain.last().unwrap(), radical);
        if next.size() == chain.last().unwrap().size() {
            return Err(RingError::Internal("radical is not nilpotent".into()));
        }
        chain.push(next);
    }
    let index = chain.len();
    Ok((chain, index))
}

/// Left socle `{x : Jx = 0}` or right socle `{x : xJ = 0}`.
pub fn socle(ring: &FiniteRing, radical: &Subgroup, side: Side) -> Subgroup {
    let gens: Vec<usize> = radical.generators().iter().map(|g| ring.index(g)).collect();
    let members = (0..ring.order()).filter(|&x| {
        gens.iter().all(|&j| {
            let prod = match side {
                Side::Left => ring.mul_idx(j, x),
                Side::Right => ring.mul_idx(x, j),
            };
            prod == 0
        })
    });
    let elems: Vec<Element> = members.map(|i| ring.element(i)).collect();
    Subgroup::generated_by(ring, elems)
}

/// All idempotents in index order, optionally only central ones.
pub fn idempotents(ring: &FiniteRing, central_only: bool) -> Vec<Element> {
    let gens: Vec<usize> = (0..ring.rank()).map(|i| ring.index(&ring.generator(i))).collect();
    (0..ring.order())
        .filter(|&e| ring.mul_idx(e, e) == e)
        .filter(|&e| !central_only || gens.iter().all(|&g| ring.mul_idx(e, g) == ring.mul_idx(g, e)))
        .map(|e| ring.element(e))
        .collect()
}

/// Localness data: residue field order and D-sequence when local.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalProfile {
    pub is_local: bool,
    pub residue_field_order: Option<u64>,
    pub d_sequence: Option<Vec<u32>>,
}

fn local_profile_from(ring: &FiniteRing, units_count: usize, chain: &[Subgroup]) -> Result<LocalProfile, RingError> {
    let n = ring.order();
    let j = chain[0].size();
    if units_count + j != n {
        return Ok(LocalProfile { is_local: false, residue_field_order: None, d_sequence: None });
    }
    let q = (n / j) as u64;
    let p = smallest_prime_factor(q);
    let f =
        log_exact(p, q).ok_or_else(|| RingError::Internal(format!("residue field order {q} is not a prime power")))?;
    let mut d = Vec::new();
    for w in chain.windows(2) {
        let ratio = (w[0].size() / w[1].size()) as u64;
        let e = log_exact(p, ratio)
            .ok_or_else(|| RingError::Internal(format!("layer size {ratio} is not a power of {p}")))?;
        if e % f != 0 {
            return Err(RingError::Internal(format!("layer dimension {e} not divisible by {f}")));
        }
        d.push(e / f);
    }
    Ok(LocalProfile { is_local: true, residue_field_order: Some(q), d_sequence: Some(d) })
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

pub fn local_profile(ring: &FiniteRing) -> Result<LocalProfile, RingError> {
    let u = units(ring);
    let j = jacobson_with_units(ring, &u);
    let (chain, _) = radical_chain(ring, &j)?;
    local_profile_from(ring, u.count(), &chain)
}

/// Everything the structure module computes about a ring.
#[derive(Clone, Debug)]
pub struct StructureProfile {
    pub order: usize,
    pub characteristic: u64,
    pub units: ElementSet,
    pub radical: Subgroup,
    pub radical_chain: Vec<Subgroup>,
    pub nilpotency_index: usize,
    pub socle_left: Subgroup,
    pub socle_right: Subgroup,
    pub local: LocalProfile,
    pub idempotent_count: usize,
    pub central_idempotent_count: usize,
    pub is_indecomposable: bool,
}

impl StructureProfile {
    pub fn compute(ring: &FiniteRing) -> Result<Self, RingError> {
        let units = units(ring);
        let radical = jacobson_with_units(ring, &units);
        let (radical_chain, nilpotency_index) = radical_chain(ring, &radical)?;
        let local = local_profile_from(ring, units.count(), &radical_chain)?;
        let socle_left = socle(ring, &radical, Side::Left);
        let socle_right = socle(ring, &radical, Side::Right);
        let (idempotent_count, central_idempotent_count) =
            if local.is_local { (2, 2) } else { (idempotents(ring, false).len(), idempotents(ring, true).len()) };
        Ok(Self {
            order: ring.order(),
            characteristic: ring.characteristic(),
            units,
            radical,
            radical_chain,
            nilpotency_index,
            socle_left,
            socle_right,
            local,
            idempotent_count,
            central_idempotent_count,
            is_indecomposable: central_idempotent_count == 2,
        })
    }

    pub fn units_count(&self) -> usize {
        self.units.count()
    }

    pub fn is_local(&self) -> bool {
        self.local.is_local
    }

    pub fn d_sequence(&self) -> Option<&[u32]> {
        self.local.d_sequence.as_deref()
    }

    pub fn residue_field_order(&self) -> Option<u64> {
        self.local.residue_field_order
    }

    /// Sizes `|J|, |J^2|, ...` down to 1.
    pub fn chain_sizes(&self) -> Vec<usize> {
        self.radical_chain.iter().map(Subgroup::size).collect()
    }

    /// `|J^k|` for `k >= 1`; 1 beyond the chain.
    pub fn power_size(&self, k: usize) -> usize {
        self.radical_chain.get(k - 1).map_or(1, Subgroup::size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{builtin_group, group_algebra, integers_mod, matrix_ring};

    #[test]
    fn integers_mod_four() {
        let r = integers_mod(4).unwrap();
        let p = StructureProfile::compute(&r).unwrap();
        assert_eq!(p.units.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(p.radical.members().iter().collect::<Vec<_>>(), vec![0, 2]);
        assert!(p.is_local());
        assert_eq!(p.d_sequence(), Some(&[1][..]));
        assert_eq!(p.nilpotency_index, 2);
        assert_eq!(idempotents(&r, false).len(), 2);
    }

    #[test]
    fn field_of_three() {
        let r = integers_mod(3).unwrap();
        let p = StructureProfile::compute(&r).unwrap();
        assert_eq!(p.units_count(), 2);
        assert!(p.radical.is_trivial());
        assert_eq!(p.nilpotency_index, 1);
        assert_eq!(p.socle_left.size(), 3);
        assert_eq!(p.d_sequence(), Some(&[][..]));
    }

    #[test]
    fn quaternion_group_algebra() {
        let r = group_algebra(2, &builtin_group("Q8").unwrap()).unwrap();
        let p = StructureProfile::compute(&r).unwrap();
        assert_eq!(p.units_count(), 128);
        assert_eq!(p.radical.size(), 128);
        assert_eq!(p.d_sequence(), Some(&[2, 2, 2, 1][..]));
        assert_eq!(p.nilpotency_index, 5);
        assert_eq!(p.socle_left.size(), 2);
        // The socle is spanned by the sum of all group elements.
        let all_ones = Element(vec![1; 8]);
        assert!(p.socle_left.contains_element(&r, &all_ones));
    }

    #[test]
    fn s3_group_algebra_is_decomposable() {
        let s3 = builtin_group("S3").unwrap();
        let r = group_algebra(2, &s3).unwrap();
        let p = StructureProfile::compute(&r).unwrap();
        assert!(!p.is_local());
        assert!(!p.is_indecomposable);
        let mut e = vec![0; 6];
        for g in ["e", "r", "r2"] {
            e[s3.index_of(g).unwrap()] = 1;
        }
        assert!(idempotents(&r, true).contains(&Element(e)));
    }

    #[test]
    fn matrix_ring_is_simple() {
        let r = matrix_ring(2, 2).unwrap();
        let p = StructureProfile::compute(&r).unwrap();
        assert!(p.radical.is_trivial());
        assert!(!p.is_local());
        assert!(p.is_indecomposable);
        assert_eq!(p.units_count(), 6);
    }

    #[test]
    fn linear_and_scanned_units_agree() {
        let r = group_algebra(3, &builtin_group("C3").unwrap()).unwrap();
        assert_eq!(units(&r), units_by_scan(&r));
    }
}

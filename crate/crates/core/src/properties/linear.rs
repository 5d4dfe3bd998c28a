use super::{Checker, PropertyKind};
use crate::linalg::{operator_matrix, FpMatrix, Side};
use crate::ring::{Element, FiniteRing, RingError};

pub(super) fn all_left_kernels(ring: &FiniteRing) -> Vec<Vec<usize>> {
    (0..ring.order()).map(|i| kernel_indices(ring, &ring.element(i), Side::Left)).collect()
}

fn kernel_indices(ring: &FiniteRing, a: &Element, side: Side) -> Vec<usize> {
    kernel_elements(ring, a, side).map(|b| ring.index(&b)).collect()
}

fn kernel_elements(ring: &FiniteRing, a: &Element, side: Side) -> impl Iterator<Item = Element> {
    let m = operator_matrix(ring, a, side).expect("caller checked prime field");
    m.kernel_basis().basis().to_vec().into_iter().map(Element)
}

pub(super) fn find_violation(ck: &Checker<'_>, kind: PropertyKind) -> Result<Option<Vec<usize>>, RingError> {
    let r = ck.ring();
    let n = r.order();
    let m = |a: usize, b: usize| r.mul_idx(a, b);
    let gens = ck.gens();
    Ok(match kind {
        PropertyKind::Commutative => commutator_pair(ck).map(|(a, b)| vec![a, b]),
        PropertyKind::Reduced => {
            // A nonzero element of the last nonzero power of J squares to 0;
            // a semisimple noncommutative ring has a matrix block.
            let chain = ck.radical_chain();
            match chain.iter().rev().find(|s| !s.is_trivial()) {
                Some(last) => Some(vec![r.index(&last.generators()[0])]),
                None if commutator_pair(ck).is_some() => ck.square_zero(),
                None => None,
            }
        }
        PropertyKind::Reversible => {
            // ker L_a = ker R_a for every a, using structure constants only.
            let nonzero = |x: &Element, y: &Element| !r.mul(x, y).is_zero();
            (0..n).find_map(|a| {
                let a_el = r.element(a);
                if let Some(b) = kernel_elements(r, &a_el, Side::Left).find(|b| nonzero(b, &a_el)) {
                    return Some(vec![a, r.index(&b)]);
                }
                kernel_elements(r, &a_el, Side::Right).find(|b| nonzero(&a_el, b)).map(|b| vec![r.index(&b), a])
            })
        }
        PropertyKind::Symmetric => {
            // ker L_{ab} within ker L_{ba} for every a, b.
            let kernels = ck.left_kernels();
            (0..n).find_map(|a| {
                (0..n).find_map(|b| {
                    let (ab, ba) = (m(a, b), m(b, a));
                    if ab == ba {
                        return None;
                    }
                    kernels[ab].iter().find(|&&c| m(ba, c) != 0).map(|&c| vec![a, b, c])
                })
            })
        }
        PropertyKind::Semicommutative => {
            // ker L_a within ker L_{a g} for every a and generator g.
            let kernels = ck.left_kernels();
            (0..n).find_map(|a| {
                gens.iter().find_map(|&g| {
                    let ag = m(a, g);
                    kernels[a].iter().find(|&&b| m(ag, b) != 0).map(|&b| vec![a, b, g])
                })
            })
        }
        PropertyKind::Reflexive => {
            // {b : aRb = 0} is the kernel of the stacked L_{a g}.
            let p = r.prime_field().expect("caller checked prime field");
            let t = r.rank();
            (0..n).find_map(|a| {
                let a_el = r.element(a);
                let mut rows = Vec::with_capacity(t * t);
                for g in r.generators() {
                    let op = operator_matrix(r, &r.mul(&a_el, &g), Side::Left).expect("prime field");
                    rows.extend((0..t).map(|i| op.row(i).to_vec()));
                }
                let stacked = FpMatrix::from_rows(p, t, &rows);
                stacked.kernel_basis().basis().iter().find_map(|v| {
                    let b = r.index(&Element(v.clone()));
                    gens.iter().find(|&&g| m(m(b, g), a) != 0).map(|&g| vec![a, b, g])
                })
            })
        }
        PropertyKind::TwoPrimal => {
            // Nilpotents equal J exactly when R/J is commutative.
            let j = ck.radical();
            let commute_mod_j = gens.iter().all(|&x| gens.iter().all(|&y| j.contains(r.sub_idx(m(x, y), m(y, x)))));
            if commute_mod_j {
                None
            } else {
                ck.two_primal_witness()
            }
        }
        PropertyKind::RightDuo => duo(ck, Side::Right),
        PropertyKind::LeftDuo => duo(ck, Side::Left),
    })
}

fn commutator_pair(ck: &Checker<'_>) -> Option<(usize, usize)> {
    let r = ck.ring();
    let gens = ck.gens();
    gens.iter().find_map(|&a| gens.iter().find(|&&b| r.mul_idx(a, b) != r.mul_idx(b, a)).map(|&b| (a, b)))
}

/// Right duo: image(R_a) within image(L_a); left duo dually.
fn duo(ck: &Checker<'_>, side: Side) -> Option<Vec<usize>> {
    let r = ck.ring();
    (0..r.order()).find_map(|a| {
        let a_el = r.element(a);
        let (own, other) = match side {
            Side::Right => (Side::Left, Side::Right),
            Side::Left => (Side::Right, Side::Left),
        };
        let ideal = operator_matrix(r, &a_el, own).expect("prime field").image();
        let probe = operator_matrix(r, &a_el, other).expect("prime field");
        (0..r.rank()).find(|&j| !ideal.contains(&probe.column(j))).map(|j| vec![a, ck.gens()[j]])
    })
}

use super::{Checker, PropertyKind};
use crate::subgroup::ElementSet;

/// Raw-definition scans over element indices; `None` when the property holds.
pub(super) fn find_violation(ck: &Checker<'_>, kind: PropertyKind) -> Option<Vec<usize>> {
    let r = ck.ring();
    let n = r.order();
    let m = |a: usize, b: usize| r.mul_idx(a, b);
    match kind {
        PropertyKind::Commutative => (0..n).find_map(|a| (0..n).find(|&b| m(a, b) != m(b, a)).map(|b| vec![a, b])),
        PropertyKind::Reduced => ck.square_zero(),
        PropertyKind::Reversible => {
            (0..n).find_map(|a| (0..n).find(|&b| m(a, b) == 0 && m(b, a) != 0).map(|b| vec![a, b]))
        }
        PropertyKind::Symmetric => {
            for a in 0..n {
                for b in 0..n {
                    let (ab, ba) = (m(a, b), m(b, a));
                    if ab == ba {
                        continue;
                    }
                    if let Some(c) = (0..n).find(|&c| m(ab, c) == 0 && m(ba, c) != 0) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        }
        PropertyKind::Semicommutative => {
            let gens = ck.gens();
            for a in 0..n {
                let ag: Vec<usize> = gens.iter().map(|&g| m(a, g)).collect();
                for b in 0..n {
                    if m(a, b) != 0 {
                        continue;
                    }
                    if let Some(i) = ag.iter().position(|&x| m(x, b) != 0) {
                        return Some(vec![a, b, gens[i]]);
                    }
                }
            }
            None
        }
        PropertyKind::Reflexive => {
            let gens = ck.gens();
            for a in 0..n {
                let ag: Vec<usize> = gens.iter().map(|&g| m(a, g)).collect();
                for b in 0..n {
                    if ag.iter().any(|&x| m(x, b) != 0) {
                        continue;
                    }
                    if let Some(&g) = gens.iter().find(|&&g| m(m(b, g), a) != 0) {
                        return Some(vec![a, b, g]);
                    }
                }
            }
            None
        }
        PropertyKind::TwoPrimal => ck.two_primal_witness(),
        PropertyKind::RightDuo => duo(ck, true),
        PropertyKind::LeftDuo => duo(ck, false),
    }
}

/// Every right ideal is a sum of principal ones, so right duo reduces to
/// `ra in aR` for all `a, r` (left duo: `ar in Ra`).
fn duo(ck: &Checker<'_>, right: bool) -> Option<Vec<usize>> {
    let r = ck.ring();
    let n = r.order();
    let prod = |a: usize, y: usize| if right { r.mul_idx(a, y) } else { r.mul_idx(y, a) };
    for a in 0..n {
        let mut ideal = ElementSet::new(n);
        for y in 0..n {
            ideal.insert(prod(a, y));
        }
        if let Some(s) = (0..n).find(|&s| !ideal.contains(prod(s, a))) {
            return Some(vec![a, s]);
        }
    }
    None
}

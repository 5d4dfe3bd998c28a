//! The nine ring properties of the implication diagram, decided with
//! replayable witnesses by an exhaustive or a linear-algebra backend.

mod exhaustive;
mod linear;

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::ring::{Element, FiniteRing, RingError};
use crate::structure;
use crate::subgroup::{ElementSet, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyKind {
    Commutative,
    Reduced,
    Symmetric,
    Reversible,
    Semicommutative,
    Reflexive,
    TwoPrimal,
    LeftDuo,
    RightDuo,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 9] = [
        PropertyKind::Commutative,
        PropertyKind::Reduced,
        PropertyKind::Symmetric,
        PropertyKind::Reversible,
        PropertyKind::Semicommutative,
        PropertyKind::Reflexive,
        PropertyKind::TwoPrimal,
        PropertyKind::LeftDuo,
        PropertyKind::RightDuo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Commutative => "commutative",
            PropertyKind::Reduced => "reduced",
            PropertyKind::Symmetric => "symmetric",
            PropertyKind::Reversible => "reversible",
            PropertyKind::Semicommutative => "semicommutative",
            PropertyKind::Reflexive => "reflexive",
            PropertyKind::TwoPrimal => "two_primal",
            PropertyKind::LeftDuo => "left_duo",
            PropertyKind::RightDuo => "right_duo",
        }
    }

    /// What a witness tuple for a failure must satisfy.
    pub fn witness_shape(self) -> &'static str {
        match self {
            PropertyKind::Commutative => "(a, b): ab != ba",
            PropertyKind::Reduced => "(x): x != 0, x^2 = 0",
            PropertyKind::Symmetric => "(a, b, c): abc = 0, bac != 0",
            PropertyKind::Reversible => "(a, b): ab = 0, ba != 0",
            PropertyKind::Semicommutative => "(a, b, r): ab = 0, arb != 0",
            PropertyKind::Reflexive => "(a, b, r): aRb = 0, bra != 0",
            PropertyKind::TwoPrimal => "(x, r): x nilpotent, 1 - rx not a unit",
            PropertyKind::LeftDuo => "(a, r): ar not in Ra",
            PropertyKind::RightDuo => "(a, r): ra not in aR",
        }
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for PropertyKind {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let norm = match norm.as_str() {
            "2_primal" | "2primal" | "twoprimal" => "two_primal".to_string(),
            _ => norm,
        };
        PropertyKind::ALL.into_iter().find(|k| k.name() == norm).ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exhaustive,
    Linear,
    Auto,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exhaustive => "exhaustive",
            Backend::Linear => "linear",
            Backend::Auto => "auto",
        }
    }

    /// Linear for `F_p`-algebras of order above 64, exhaustive otherwise.
    pub fn resolve(self, ring: &FiniteRing) -> Backend {
        match self {
            Backend::Auto if ring.prime_field().is_some() && ring.order() > 64 => Backend::Linear,
            Backend::Auto => Backend::Exhaustive,
            b => b,
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Backend::Exhaustive),
            "linear" => Ok(Backend::Linear),
            "auto" => Ok(Backend::Auto),
            _ => Err(format!("unknown backend `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub kind: PropertyKind,
    pub holds: bool,
    /// Present exactly when `holds` is false; see [`PropertyKind::witness_shape`].
    pub witness: Option<Vec<Element>>,
    pub backend: Backend,
    pub elapsed: Duration,
}

/// Shared per-ring data for repeated checks. Caches fill on first use.
pub struct Checker<'a> {
    ring: &'a FiniteRing,
    gens: Vec<usize>,
    units: OnceCell<ElementSet>,
    radical: OnceCell<(Subgroup, Vec<Subgroup>)>,
    kernels: OnceCell<Vec<Vec<usize>>>,
}

impl<'a> Checker<'a> {
    pub fn new(ring: &'a FiniteRing) -> Self {
        let gens = ring.generators().iter().map(|g| ring.index(g)).collect();
        Self { ring, gens, units: OnceCell::new(), radical: OnceCell::new(), kernels: OnceCell::new() }
    }

    pub fn ring(&self) -> &FiniteRing {
        self.ring
    }

    pub(crate) fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub(crate) fn units(&self) -> &ElementSet {
        self.units.get_or_init(|| structure::units(self.ring))
    }

    pub(crate) fn radical(&self) -> &Subgroup {
        &self.radical_data().0
    }

    pub(crate) fn radical_chain(&self) -> &[Subgroup] {
        &self.radical_data().1
    }

    fn radical_data(&self) -> &(Subgroup, Vec<Subgroup>) {
        self.radical.get_or_init(|| {
            let j = structure::jacobson_radical(self.ring);
            let chain = structure::radical_chain(self.ring, &j).map(|(c, _)| c).unwrap_or_else(|_| vec![j.clone()]);
            (j, chain)
        })
    }

    /// Basis of `ker L_x` for every element, as element indices.
    pub(crate) fn left_kernels(&self) -> &[Vec<usize>] {
        self.kernels.get_or_init(|| linear::all_left_kernels(self.ring))
    }

    pub fn check(&self, kind: PropertyKind, backend: Backend) -> Result<PropertyResult, RingError> {
        let backend = backend.resolve(self.ring);
        let start = Instant::now();
        let witness = match backend {
            Backend::Linear => {
                if self.ring.prime_field().is_none() {
                    return Err(RingError::BackendUnavailable(format!(
                        "linear backend needs an F_p-algebra; this ring has moduli {:?}",
                        self.ring.additive().moduli()
                    )));
                }
                linear::find_violation(self, kind)?
            }
            _ => exhaustive::find_violation(self, kind),
        };
        let witness = witness.map(|w| w.into_iter().map(|i| self.ring.element(i)).collect());
        Ok(PropertyResult { kind, holds: witness.is_none(), witness, backend, elapsed: start.elapsed() })
    }

    /// Nilpotent elements not in `J`, with a non-unit `1 - rx`.
    pub(crate) fn two_primal_witness(&self) -> Option<Vec<usize>> {
        let r = self.ring;
        let j = self.radical();
        let one = r.one_idx();
        let units = self.units();
        (0..r.order()).filter(|&x| !j.contains(x) && is_nilpotent_idx(r, x)).find_map(|x| {
            (0..r.order()).find(|&s| !units.contains(r.sub_idx(one, r.mul_idx(s, x)))).map(|s| vec![x, s])
        })
    }

    /// First `x != 0` with `x^2 = 0`.
    pub(crate) fn square_zero(&self) -> Option<Vec<usize>> {
        let r = self.ring;
        (1..r.order()).find(|&x| r.mul_idx(x, x) == 0).map(|x| vec![x])
    }
}

/// `x^32 = 0`. Any nilpotent element of a ring of order at most `2^16`
/// satisfies `x^16 = 0`, since the right ideals `x^k R` strictly shrink.
pub fn is_nilpotent(ring: &FiniteRing, x: &Element) -> bool {
    let mut y = x.clone();
    for _ in 0..5 {
        y = ring.mul(&y, &y);
    }
    y.is_zero()
}

fn is_nilpotent_idx(ring: &FiniteRing, x: usize) -> bool {
    let mut y = x;
    for _ in 0..5 {
        y = ring.mul_idx(y, y);
    }
    y == 0
}

pub fn check(ring: &FiniteRing, kind: PropertyKind, backend: Backend) -> Result<PropertyResult, RingError> {
    Checker::new(ring).check(kind, backend)
}

/// All nine properties in [`PropertyKind::ALL`] order.
pub fn profile(ring: &FiniteRing, backend: Backend) -> Result<Vec<PropertyResult>, RingError> {
    let checker = Checker::new(ring);
    PropertyKind::ALL.iter().map(|&k| checker.check(k, backend)).collect()
}

fn is_unit(ring: &FiniteRing, x: &Element) -> bool {
    ring.elements().any(|y| ring.mul(x, &y) == *ring.one())
}

/// True when `witness` demonstrates that `kind` fails, using only ring
/// arithmetic.
pub fn replay(ring: &FiniteRing, kind: PropertyKind, witness: &[Element]) -> bool {
    let m = |x: &Element, y: &Element| ring.mul(x, y);
    let zero = |x: &Element| x.is_zero();
    match (kind, witness) {
        (PropertyKind::Commutative, [a, b]) => m(a, b) != m(b, a),
        (PropertyKind::Reduced, [x]) => !zero(x) && zero(&m(x, x)),
        (PropertyKind::Symmetric, [a, b, c]) => zero(&m(&m(a, b), c)) && !zero(&m(&m(b, a), c)),
        (PropertyKind::Reversible, [a, b]) => zero(&m(a, b)) && !zero(&m(b, a)),
        (PropertyKind::Semicommutative, [a, b, r]) => zero(&m(a, b)) && !zero(&m(&m(a, r), b)),
        (PropertyKind::Reflexive, [a, b, r]) => {
            ring.generators().iter().all(|g| zero(&m(&m(a, g), b))) && !zero(&m(&m(b, r), a))
        }
        (PropertyKind::TwoPrimal, [x, r]) => is_nilpotent(ring, x) && !is_unit(ring, &ring.sub(ring.one(), &m(r, x))),
        (PropertyKind::RightDuo, [a, r]) => {
            let ra = m(r, a);
            !ring.elements().any(|y| m(a, &y) == ra)
        }
        (PropertyKind::LeftDuo, [a, r]) => {
            let ar = m(a, r);
            !ring.elements().any(|y| m(&y, a) == ar)
        }
        _ => false,
    }
}

/// An idempotent `e` with `a = e g (1 - e) != 0` for some additive generator
/// `g`; then `ea = a` and `ae = 0`, so the ring is not reversible.
/// Idempotents are tried sparsest first.
pub fn idempotent_shortcut(ring: &FiniteRing) -> Option<(Element, Element)> {
    let mut ids = structure::idempotents(ring, false);
    ids.retain(|e| !e.is_zero() && e != ring.one());
    ids.sort_by(|x, y| {
        let wx = x.0.iter().filter(|&&c| c != 0).count();
        let wy = y.0.iter().filter(|&&c| c != 0).count();
        wx.cmp(&wy).then_with(|| y.0.cmp(&x.0))
    });
    for e in ids {
        let co = ring.sub(ring.one(), &e);
        for g in ring.generators() {
            let a = ring.mul(&ring.mul(&e, &g), &co);
            if !a.is_zero() {
                return Some((e, a));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{builtin_group, group_algebra, integers_mod, matrix_ring};

    #[test]
    fn names_round_trip() {
        for k in PropertyKind::ALL {
            assert_eq!(k.name().parse::<PropertyKind>().unwrap(), k);
        }
        assert_eq!("2-primal".parse::<PropertyKind>().unwrap(), PropertyKind::TwoPrimal);
        assert!("armendariz".parse::<PropertyKind>().is_err());
    }

    #[test]
    fn z4_has_every_property_but_reducedness() {
        let r = integers_mod(4).unwrap();
        for res in profile(&r, Backend::Auto).unwrap() {
            assert_eq!(res.holds, res.kind != PropertyKind::Reduced, "{}", res.kind);
        }
        let w = check(&r, PropertyKind::Reduced, Backend::Exhaustive).unwrap().witness.unwrap();
        assert_eq!(w, vec![Element(vec![2])]);
    }

    #[test]
    fn matrix_ring_fails_reversibility() {
        let r = matrix_ring(2, 2).unwrap();
        for backend in [Backend::Exhaustive, Backend::Linear] {
            let res = check(&r, PropertyKind::Reversible, backend).unwrap();
            assert!(!res.holds);
            assert!(replay(&r, PropertyKind::Reversible, res.witness.as_ref().unwrap()));
        }
        let (e, a) = idempotent_shortcut(&r).unwrap();
        assert_eq!((e, a), (r.generator(0), r.generator(1)));
    }

    #[test]
    fn linear_backend_needs_prime_field() {
        let r = integers_mod(4).unwrap();
        assert!(matches!(check(&r, PropertyKind::Reversible, Backend::Linear), Err(RingError::BackendUnavailable(_))));
    }

    #[test]
    fn backends_agree_on_small_group_algebras() {
        for (p, g) in [(2, "S3"), (2, "C4"), (3, "C3"), (2, "C2")] {
            let r = group_algebra(p, &builtin_group(g).unwrap()).unwrap();
            let ex = profile(&r, Backend::Exhaustive).unwrap();
            let li = profile(&r, Backend::Linear).unwrap();
            for (a, b) in ex.iter().zip(&li) {
                assert_eq!(a.holds, b.holds, "{g} {}", a.kind);
                for res in [a, b] {
                    if let Some(w) = &res.witness {
                        assert!(replay(&r, res.kind, w), "{g} {} {:?}", res.kind, res.backend);
                    }
                }
            }
        }
    }

    #[test]
    fn replay_rejects_non_witnesses() {
        let r = integers_mod(4).unwrap();
        let two = Element(vec![2]);
        assert!(!replay(&r, PropertyKind::Reversible, &[two.clone(), two.clone()]));
        assert!(replay(&r, PropertyKind::Reduced, &[two]));
        assert!(!replay(&r, PropertyKind::Commutative, &[r.one().clone()]));
    }
}

use serde::{Deserialize, Serialize};

use crate::linalg::{operator_matrix, Side};
use crate::ring::{FiniteRing, RingError};
use crate::structure::{idempotents, StructureProfile};

/// Isomorphism invariants used to group rings. Equal fingerprints do not
/// imply isomorphic rings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub characteristic: u64,
    /// Prime-power cyclic factors of the additive group, ascending.
    pub additive_type: Vec<u32>,
    pub d_sequence: Option<Vec<u32>>,
    pub nilpotency_index: usize,
    pub units: usize,
    /// `|{(a, b) : ab = 0}|`.
    pub zero_products: u64,
    pub idempotents: usize,
    pub socle_left: usize,
    pub socle_right: usize,
}

impl Fingerprint {
    pub fn compute(ring: &FiniteRing) -> Result<Self, RingError> {
        Ok(Self::from_profile(ring, &StructureProfile::compute(ring)?))
    }

    pub fn from_profile(ring: &FiniteRing, s: &StructureProfile) -> Self {
        let idempotent_count = if s.is_local() { 2 } else { idempotents(ring, false).len() };
        Self {
            order: s.order,
            characteristic: s.characteristic,
            additive_type: ring.additive().primary_type(),
            d_sequence: s.d_sequence().map(<[u32]>::to_vec),
            nilpotency_index: s.nilpotency_index,
            units: s.units_count(),
            zero_products: zero_products(ring),
            idempotents: idempotent_count,
            socle_left: s.socle_left.size(),
            socle_right: s.socle_right.size(),
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        format!("{:x}", Sha256::digest(serde_json::to_vec(self).expect("serializable")))
    }
}

/// Sum over `a` of the right annihilator size; `p^(dim ker L_a)` for
/// `F_p`-algebras.
fn zero_products(ring: &FiniteRing) -> u64 {
    match ring.prime_field() {
        Some(p) => ring
            .elements()
            .map(|a| {
                let m = operator_matrix(ring, &a, Side::Left).expect("prime field");
                (p as u64).pow((ring.rank() - m.rank()) as u32)
            })
            .sum(),
        None => {
            let n = ring.order();
            (0..n).map(|a| (0..n).filter(|&b| ring.mul_idx(a, b) == 0).count() as u64).sum()
        }
    }
}

use serde::{Deserialize, Serialize};

use super::RingError;

/// Largest ring order this crate will represent.
pub const MAX_ORDER: usize = 1 << 16;

/// Additive group `Z/m_1 + ... + Z/m_t` with a fixed ordered generating set.
///
/// Elements are indexed in mixed radix with the first coordinate most
/// significant, so index order is the lexicographic order on coefficient
/// tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AdditiveModel {
    moduli: Vec<u32>,
}

impl AdditiveModel {
    pub fn new(moduli: Vec<u32>) -> Result<Self, RingError> {
        if moduli.is_empty() {
            return Err(RingError::Shape("additive model needs at least one generator".into()));
        }
        let mut order: usize = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(RingError::Shape(format!("modulus {m} is below 2")));
            }
            order = order.checked_mul(m as usize).filter(|&o| o <= MAX_ORDER).ok_or(RingError::TooLarge)?;
        }
        Ok(Self { moduli })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// Number of additive generators.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    /// `Some(p)` when every modulus equals the same prime `p`.
    pub fn prime_field(&self) -> Option<u32> {
        let p = self.moduli[0];
        (is_prime(p as u64) && self.moduli.iter().all(|&m| m == p)).then_some(p)
    }

    pub fn index_of(&self, coeffs: &[u32]) -> usize {
        coeffs.iter().zip(&self.moduli).fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    pub fn coeffs_of(&self, mut index: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.moduli.len()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % m as usize) as u32;
            index /= m as usize;
        }
        out
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.moduli).map(|((&x, &y), &m)| ((x as u64 + y as u64) % m as u64) as u32).collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.moduli).map(|(&x, &m)| (m - x) % m).collect()
    }

    pub fn scale(&self, k: u64, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.moduli).map(|(&x, &m)| ((x as u64 % m as u64) * (k % m as u64) % m as u64) as u32).collect()
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &[u32]) -> u64 {
        a.iter().zip(&self.moduli).map(|(&x, &m)| m as u64 / gcd(x as u64, m as u64)).fold(1, lcm)
    }

    /// Canonical isomorphism type: the sorted prime-power cyclic factors.
    pub fn primary_type(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for &m in &self.moduli {
            let mut rest = m;
            let mut q = 2;
            while q * q <= rest {
                if rest % q == 0 {
                    let mut pk = 1;
                    while rest % q == 0 {
                        rest /= q;
                        pk *= q;
                    }
                    out.push(pk);
                }
                q += 1;
            }
            if rest > 1 {
                out.push(rest);
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `Some(e)` when `n == p^e`.
pub fn log_exact(p: u64, mut n: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_lexicographic() {
        let a = AdditiveModel::new(vec![2, 3]).unwrap();
        let listed: Vec<_> = (0..a.order()).map(|i| a.coeffs_of(i)).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(listed, sorted);
        for i in 0..a.order() {
            assert_eq!(a.index_of(&a.coeffs_of(i)), i);
        }
    }

    #[test]
    fn prime_field_flag() {
        assert_eq!(AdditiveModel::new(vec![2, 2, 2]).unwrap().prime_field(), Some(2));
        assert_eq!(AdditiveModel::new(vec![4]).unwrap().prime_field(), None);
        assert_eq!(AdditiveModel::new(vec![2, 3]).unwrap().prime_field(), None);
    }

    #[test]
    fn rejects_small_moduli_and_huge_orders() {
        assert!(AdditiveModel::new(vec![1]).is_err());
        assert!(AdditiveModel::new(vec![]).is_err());
        assert!(matches!(AdditiveModel::new(vec![2; 17]), Err(RingError::TooLarge)));
    }

    #[test]
    fn primary_type_is_canonical() {
        let a = AdditiveModel::new(vec![6]).unwrap();
        let b = AdditiveModel::new(vec![3, 2]).unwrap();
        assert_eq!(a.primary_type(), b.primary_type());
        assert_ne!(
            AdditiveModel::new(vec![4]).unwrap().primary_type(),
            AdditiveModel::new(vec![2, 2]).unwrap().primary_type()
        );
    }
}

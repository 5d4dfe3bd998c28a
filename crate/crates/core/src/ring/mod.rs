//! The universal finite-ring carrier: a finite abelian group given by cyclic
//! generators, plus structure constants for the products of generators.

mod additive;
mod validate;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use additive::{gcd, is_prime, lcm, log_exact, AdditiveModel, MAX_ORDER};
pub use validate::{validate, Slot, ValidationReport, Violation};

/// Rings up to this order get a precomputed multiplication table.
pub const TABLE_LIMIT: usize = 1024;

#[derive(Debug, thiserror::Error)]
pub enum RingError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring order exceeds {MAX_ORDER}")]
    TooLarge,
    #[error("ring failed validation: {0}")]
    Invalid(ValidationReport),
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

/// Coefficient tuple over the additive generators, reduced componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<u32>);

impl Element {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Serialized ring: `{moduli, constants, one, labels}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingData {
    pub moduli: Vec<u32>,
    pub constants: Vec<Vec<Vec<u32>>>,
    pub one: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A validated finite ring with identity. Immutable once built.
pub struct FiniteRing {
    additive: AdditiveModel,
    /// Flattened `c[i][j][k]`: coefficient of `g_k` in `g_i * g_j`.
    constants: Vec<u32>,
    one: Element,
    labels: Option<Vec<String>>,
    table: OnceLock<Option<Vec<u16>>>,
    sums: OnceLock<Option<Vec<u16>>>,
}

impl Clone for FiniteRing {
    fn clone(&self) -> Self {
        Self {
            additive: self.additive.clone(),
            constants: self.constants.clone(),
            one: self.one.clone(),
            labels: self.labels.clone(),
            table: OnceLock::new(),
            sums: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.additive == other.additive
            && self.constants == other.constants
            && self.one == other.one
            && self.labels == other.labels
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("moduli", &self.additive.moduli())
            .field("order", &self.order())
            .field("labels", &self.labels)
            .finish()
    }
}

impl FiniteRing {
    /// Checks shapes, then validates; only a ring with an empty report is returned.
    pub fn from_data(data: RingData) -> Result<Self, RingError> {
        let ring = Self::unchecked(data)?;
        let report = validate::validate_ring(&ring);
        if report.is_empty() {
            Ok(ring)
        } else {
            Err(RingError::Invalid(report))
        }
    }

    /// Shape-checked but not law-checked construction.
    pub(crate) fn unchecked(data: RingData) -> Result<Self, RingError> {
        let additive = AdditiveModel::new(data.moduli)?;
        let t = additive.rank();
        let check_tuple = |what: &str, v: &[u32]| -> Result<(), RingError> {
            if v.len() != t {
                return Err(RingError::Shape(format!("{what} has length {} but rank is {t}", v.len())));
            }
            for (k, (&c, &m)) in v.iter().zip(additive.moduli()).enumerate() {
                if c >= m {
                    return Err(RingError::Shape(format!(
                        "{what}: coefficient {c} at position {k} not below modulus {m}"
                    )));
                }
            }
            Ok(())
        };
        if data.constants.len() != t {
            return Err(RingError::Shape(format!("constants has {} rows, expected {t}", data.constants.len())));
        }
        let mut constants = Vec::with_capacity(t * t * t);
        for (i, row) in data.constants.iter().enumerate() {
            if row.len() != t {
                return Err(RingError::Shape(format!("constants row {i} has {} entries, expected {t}", row.len())));
            }
            for (j, c) in row.iter().enumerate() {
                check_tuple(&format!("constant [{i}][{j}]"), c)?;
                constants.extend_from_slice(c);
            }
        }
        check_tuple("one", &data.one)?;
        if let Some(labels) = &data.labels {
            if labels.len() != t {
                return Err(RingError::Shape(format!("{} labels for rank {t}", labels.len())));
            }
        }
        Ok(Self {
            additive,
            constants,
            one: Element(data.one),
            labels: data.labels,
            table: OnceLock::new(),
            sums: OnceLock::new(),
        })
    }

    pub fn to_data(&self) -> RingData {
        let t = self.rank();
        let constants = (0..t).map(|i| (0..t).map(|j| self.constant(i, j).to_vec()).collect()).collect();
        RingData {
            moduli: self.additive.moduli().to_vec(),
            constants,
            one: self.one.0.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("ring data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RingError> {
        let data: RingData = serde_json::from_str(text).map_err(|e| RingError::Shape(format!("bad ring JSON: {e}")))?;
        Self::from_data(data)
    }

    pub fn additive(&self) -> &AdditiveModel {
        &self.additive
    }

    pub fn rank(&self) -> usize {
        self.additive.rank()
    }

    pub fn order(&self) -> usize {
        self.additive.order()
    }

    pub fn prime_field(&self) -> Option<u32> {
        self.additive.prime_field()
    }

    pub fn one(&self) -> &Element {
        &self.one
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of generator `i`, defaulting to `g{i+1}`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("g{}", i + 1),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, RingError> {
        if labels.len() != self.rank() {
            return Err(RingError::Shape(format!("{} labels for rank {}", labels.len(), self.rank())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Coefficient tuple of `g_i * g_j`.
    pub fn constant(&self, i: usize, j: usize) -> &[u32] {
        let t = self.rank();
        &self.constants[(i * t + j) * t..(i * t + j + 1) * t]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Element(v)
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    pub fn element(&self, index: usize) -> Element {
        Element(self.additive.coeffs_of(index))
    }

    pub fn index(&self, x: &Element) -> usize {
        self.additive.index_of(&x.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(self.additive.add(&x.0, &y.0))
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        Element(self.additive.add(&x.0, &self.additive.neg(&y.0)))
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(self.additive.neg(&x.0))
    }

    pub fn scale(&self, k: u64, x: &Element) -> Element {
        Element(self.additive.scale(k, &x.0))
    }

    /// Bilinear extension of the structure constants.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        Element(self.mul_coeffs(&x.0, &y.0))
    }

    pub(crate) fn mul_coeffs(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let t = self.rank();
        let moduli = self.additive.moduli();
        let mut acc = vec![0u64; t];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let k = xi as u64 * yj as u64;
                let c = &self.constants[(i * t + j) * t..(i * t + j + 1) * t];
                for (a, (&ck, &m)) in acc.iter_mut().zip(c.iter().zip(moduli)) {
                    if ck != 0 {
                        *a = (*a + k % m as u64 * ck as u64) % m as u64;
                    }
                }
            }
        }
        acc.into_iter().map(|a| a as u32).collect()
    }

    /// Product of two elements given by index.
    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => {
                let x = self.additive.coeffs_of(a);
                let y = self.additive.coeffs_of(b);
                self.additive.index_of(&self.mul_coeffs(&x, &y))
            }
        }
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.sums() {
            return t[a * self.order() + b] as usize;
        }
        let x = self.additive.coeffs_of(a);
        let y = self.additive.coeffs_of(b);
        self.additive.index_of(&self.additive.add(&x, &y))
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        let x = self.additive.coeffs_of(a);
        let y = self.additive.neg(&self.additive.coeffs_of(b));
        self.additive.index_of(&self.additive.add(&x, &y))
    }

    pub fn one_idx(&self) -> usize {
        self.index(&self.one)
    }

    pub fn has_table(&self) -> bool {
        self.table().is_some()
    }

    fn table(&self) -> Option<&Vec<u16>> {
        self.table.get_or_init(|| (self.order() <= TABLE_LIMIT).then(|| self.build_table())).as_ref()
    }

    fn sums(&self) -> Option<&Vec<u16>> {
        self.sums
            .get_or_init(|| {
                (self.order() <= TABLE_LIMIT).then(|| {
                    let n = self.order();
                    let coeffs: Vec<Vec<u32>> = (0..n).map(|i| self.additive.coeffs_of(i)).collect();
                    let mut t = vec![0u16; n * n];
                    for a in 0..n {
                        for b in 0..n {
                            t[a * n + b] = self.additive.index_of(&self.additive.add(&coeffs[a], &coeffs[b])) as u16;
                        }
                    }
                    t
                })
            })
            .as_ref()
    }

    fn build_table(&self) -> Vec<u16> {
        let n = self.order();
        let t = self.rank();
        let moduli = self.additive.moduli();
        let mut table = vec![0u16; n * n];
        let mut digits = vec![0u32; t];
        let mut acc = vec![0u32; t];
        for a in 0..n {
            let x = self.additive.coeffs_of(a);
            let cols: Vec<Vec<u32>> = (0..t)
                .map(|j| {
                    let mut g = vec![0; t];
                    g[j] = 1;
                    self.mul_coeffs(&x, &g)
                })
                .collect();
            digits.iter_mut().for_each(|d| *d = 0);
            acc.iter_mut().for_each(|d| *d = 0);
            let row = &mut table[a * n..(a + 1) * n];
            for (b, slot) in row.iter_mut().enumerate() {
                if b > 0 {
                    // Odometer step; a wrapping digit contributes m_j * col_j = 0
                    // minus col_j, i.e. +col_j as well.
                    for j in (0..t).rev() {
                        for (v, (&c, &m)) in acc.iter_mut().zip(cols[j].iter().zip(moduli)) {
                            *v = (*v + c) % m;
                        }
                        digits[j] += 1;
                        if digits[j] < moduli[j] {
                            break;
                        }
                        digits[j] = 0;
                    }
                }
                *slot = self.additive.index_of(&acc) as u16;
            }
        }
        table
    }

    /// Additive order of the identity.
    pub fn characteristic(&self) -> u64 {
        self.additive.element_order(&self.one.0)
    }

    /// The ring with multiplication reversed.
    pub fn opposite(&self) -> FiniteRing {
        let t = self.rank();
        let mut constants = Vec::with_capacity(self.constants.len());
        for i in 0..t {
            for j in 0..t {
                constants.extend_from_slice(self.constant(j, i));
            }
        }
        FiniteRing {
            additive: self.additive.clone(),
            constants,
            one: self.one.clone(),
            labels: self.labels.clone(),
            table: OnceLock::new(),
            sums: OnceLock::new(),
        }
    }

    /// Componentwise product ring `A x B`.
    pub fn direct_product(a: &FiniteRing, b: &FiniteRing) -> Result<FiniteRing, RingError> {
        let (ta, tb) = (a.rank(), b.rank());
        let t = ta + tb;
        let mut moduli = a.additive.moduli().to_vec();
        moduli.extend_from_slice(b.additive.moduli());
        let additive = AdditiveModel::new(moduli)?;
        let mut constants = vec![0u32; t * t * t];
        for i in 0..t {
            for j in 0..t {
                let dst = &mut constants[(i * t + j) * t..(i * t + j + 1) * t];
                if i < ta && j < ta {
                    dst[..ta].copy_from_slice(a.constant(i, j));
                } else if i >= ta && j >= ta {
                    dst[ta..].copy_from_slice(b.constant(i - ta, j - ta));
                }
            }
        }
        let mut one = a.one.0.clone();
        one.extend_from_slice(&b.one.0);
        let labels = (0..ta)
            .map(|i| format!("({},0)", a.label(i)))
            .chain((0..tb).map(|i| format!("(0,{})", b.label(i))))
            .collect();
        Ok(FiniteRing {
            additive,
            constants,
            one: Element(one),
            labels: Some(labels),
            table: OnceLock::new(),
            sums: OnceLock::new(),
        })
    }

    /// Renders an element as a combination of generator labels.
    pub fn render(&self, x: &Element) -> String {
        let mut parts = Vec::new();
        for (i, &c) in x.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let label = self.label(i);
            parts.push(if c == 1 { label } else { format!("{c}*{label}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_mod(n: u32) -> FiniteRing {
        FiniteRing::from_data(RingData { moduli: vec![n], constants: vec![vec![vec![1]]], one: vec![1], labels: None })
            .unwrap()
    }

    #[test]
    fn table_matches_direct_products() {
        let r = FiniteRing::direct_product(&z_mod(4), &z_mod(3)).unwrap();
        assert!(r.has_table());
        for a in 0..r.order() {
            for b in 0..r.order() {
                let direct = r.index(&r.mul(&r.element(a), &r.element(b)));
                assert_eq!(r.mul_idx(a, b), direct);
            }
        }
    }

    #[test]
    fn product_order_is_multiplicative() {
        let r = FiniteRing::direct_product(&z_mod(2), &z_mod(3)).unwrap();
        assert_eq!(r.order(), 6);
        assert!(validate(&r.to_data()).unwrap().is_empty());
    }

    #[test]
    fn opposite_is_an_involution() {
        let r = z_mod(9);
        assert_eq!(r.opposite().opposite(), r);
        assert_eq!(r.opposite(), r);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = FiniteRing::direct_product(&z_mod(4), &z_mod(2)).unwrap();
        let text = r.to_json();
        let back = FiniteRing::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn characteristic_of_products() {
        let r = FiniteRing::direct_product(&z_mod(4), &z_mod(3)).unwrap();
        assert_eq!(r.characteristic(), 12);
    }
}

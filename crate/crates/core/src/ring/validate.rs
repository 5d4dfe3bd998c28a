use std::fmt;

use serde::Serialize;

use super::{FiniteRing, RingData, RingError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Violation {
    /// `m_i * (g_i g_j) != 0` (or the same for `m_j`): the product is not well defined.
    Bilinearity {
        i: usize,
        j: usize,
        side: Slot,
    },
    LeftIdentity {
        i: usize,
    },
    RightIdentity {
        i: usize,
    },
    Associativity {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `1 = 0`.
    TrivialRing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Left,
    Right,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        let shown: Vec<String> = self
            .violations
            .iter()
            .take(8)
            .map(|v| match v {
                Violation::Bilinearity { i, j, side } => {
                    format!("bilinearity at (g{}, g{}) on the {side:?} factor", i + 1, j + 1)
                }
                Violation::LeftIdentity { i } => format!("1*g{} != g{}", i + 1, i + 1),
                Violation::RightIdentity { i } => format!("g{}*1 != g{}", i + 1, i + 1),
                Violation::Associativity { i, j, k } => {
                    format!("associativity on (g{}, g{}, g{})", i + 1, j + 1, k + 1)
                }
                Violation::TrivialRing => "1 = 0".into(),
            })
            .collect();
        write!(f, "{} violation(s): {}", self.violations.len(), shown.join("; "))?;
        if self.violations.len() > shown.len() {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// Validates raw ring data. Shape problems are errors; law violations are
/// listed in the report.
pub fn validate(data: &RingData) -> Result<ValidationReport, RingError> {
    let ring = FiniteRing::unchecked(data.clone())?;
    Ok(validate_ring(&ring))
}

pub(crate) fn validate_ring(ring: &FiniteRing) -> ValidationReport {
    let mut violations = Vec::new();
    let t = ring.rank();
    let moduli = ring.additive().moduli();

    let annihilated =
        |m: u32, c: &[u32]| c.iter().zip(moduli).all(|(&ck, &mk)| (m as u64 * ck as u64).is_multiple_of(mk as u64));
    let mut well_defined = true;
    for i in 0..t {
        for j in 0..t {
            let c = ring.constant(i, j);
            if !annihilated(moduli[i], c) {
                violations.push(Violation::Bilinearity { i, j, side: Slot::Left });
                well_defined = false;
            }
            if !annihilated(moduli[j], c) {
                violations.push(Violation::Bilinearity { i, j, side: Slot::Right });
                well_defined = false;
            }
        }
    }

    if ring.one().is_zero() {
        violations.push(Violation::TrivialRing);
    }
    if !well_defined {
        return ValidationReport { violations };
    }

    let gens = ring.generators();
    for (i, g) in gens.iter().enumerate() {
        if &ring.mul(ring.one(), g) != g {
            violations.push(Violation::LeftIdentity { i });
        }
        if &ring.mul(g, ring.one()) != g {
            violations.push(Violation::RightIdentity { i });
        }
    }

    for i in 0..t {
        for j in 0..t {
            let gij = ring.mul(&gens[i], &gens[j]);
            for k in 0..t {
                let left = ring.mul(&gij, &gens[k]);
                let right = ring.mul(&gens[i], &ring.mul(&gens[j], &gens[k]));
                if left != right {
                    violations.push(Violation::Associativity { i, j, k });
                }
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinearity_violation_detected() {
        // Z/2 + Z/4 with g1*g1 = g2: 2*(g1 g1) = 2 g2 != 0 while 2 g1 = 0.
        let data = RingData {
            moduli: vec![2, 4],
            constants: vec![vec![vec![0, 1], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]],
            one: vec![1, 0],
            labels: None,
        };
        let report = validate(&data).unwrap();
        assert!(report.violations.contains(&Violation::Bilinearity { i: 0, j: 0, side: Slot::Left }));
    }

    #[test]
    fn associativity_violation_lists_the_triple() {
        // Basis {1, x} over F_2 is always associative, so use three
        // generators with x*x = y, x*y = 0, y*x = x.
        let z = vec![0, 0, 0];
        let one = vec![1, 0, 0];
        let x = vec![0, 1, 0];
        let y = vec![0, 0, 1];
        let data = RingData {
            moduli: vec![2, 2, 2],
            constants: vec![
                vec![one.clone(), x.clone(), y.clone()],
                vec![x.clone(), y.clone(), z.clone()],
                vec![y.clone(), x.clone(), z.clone()],
            ],
            one,
            labels: None,
        };
        let report = validate(&data).unwrap();
        // (x x) x = y x = x but x (x x) = x y = 0.
        assert!(report.violations.contains(&Violation::Associativity { i: 1, j: 1, k: 1 }));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let data = RingData { moduli: vec![2, 2], constants: vec![vec![vec![1, 0]]], one: vec![1, 0], labels: None };
        assert!(matches!(validate(&data), Err(RingError::Shape(_))));
    }

    #[test]
    fn trivial_ring_rejected() {
        let data = RingData { moduli: vec![2], constants: vec![vec![vec![0]]], one: vec![0], labels: None };
        let report = validate(&data).unwrap();
        assert!(report.violations.contains(&Violation::TrivialRing));
    }
}

use serde::Serialize;

use crate::construct::{free_quotient, NcPoly, Presentation};
use crate::ring::{Element, FiniteRing};
use crate::subgroup::Subgroup;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("{expected} generator images required, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image {index} has {got} coordinates, target has rank {rank}")]
    ImageShape { index: usize, got: usize, rank: usize },
}

/// One relation evaluated at the images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

/// Outcome of checking that generator images define a homomorphism, and
/// whether it is onto and bijective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub relations: Vec<RelationCheck>,
    pub relations_hold: bool,
    /// Zero-based index of the first relation not sent to 0.
    pub failing_relation: Option<usize>,
    /// Size of the unital subring generated by the images.
    pub image_size: usize,
    pub target_order: usize,
    pub is_surjective: bool,
    /// `p^(normal words)`, when the presentation saturates.
    pub source_order: Option<usize>,
    /// Set when the source could not be built.
    pub source_error: Option<String>,
    pub is_isomorphism: bool,
}

fn eval_poly(target: &FiniteRing, poly: &NcPoly, images: &[Element]) -> Element {
    let mut acc = target.zero();
    for (w, c) in poly.terms() {
        let mut term = target.one().clone();
        for &g in &w.0 {
            term = target.mul(&term, &images[g as usize]);
        }
        acc = target.add(&acc, &target.scale(c as u64, &term));
    }
    acc
}

/// Smallest additive subgroup containing 1 and `images` that is closed
/// under right multiplication by every image.
pub fn generated_subring(target: &FiniteRing, images: &[Element]) -> Subgroup {
    let mut seed = vec![target.one().clone()];
    seed.extend(images.iter().cloned());
    let mut current = Subgroup::generated_by(target, seed);
    loop {
        let mut candidates = current.generators().to_vec();
        for s in current.generators() {
            for x in images {
                candidates.push(target.mul(s, x));
            }
        }
        let next = Subgroup::generated_by(target, candidates);
        if next.size() == current.size() {
            return current;
        }
        current = next;
    }
}

/// Checks the relations of `pres` at `images` and measures the image.
pub fn verify_generated_map(
    pres: &Presentation,
    target: &FiniteRing,
    images: &[Element],
) -> Result<HomReport, VerifyError> {
    let n = pres.generators().len();
    if images.len() != n {
        return Err(VerifyError::ImageCount { expected: n, got: images.len() });
    }
    for (index, x) in images.iter().enumerate() {
        if x.0.len() != target.rank() {
            return Err(VerifyError::ImageShape { index, got: x.0.len(), rank: target.rank() });
        }
    }
    let images: Vec<Element> = images.iter().map(|x| target.add(x, &target.zero())).collect();
    let relations: Vec<RelationCheck> = pres
        .relations()
        .iter()
        .map(|r| RelationCheck {
            relation: r.render(pres.generators(), false),
            holds: eval_poly(target, r, &images).is_zero(),
        })
        .collect();
    let failing_relation = relations.iter().position(|c| !c.holds);
    let image_size = generated_subring(target, &images).size();
    let is_surjective = image_size == target.order();
    let (source_order, source_error) = match free_quotient(pres) {
        Ok(q) => (Some(q.ring.order()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let relations_hold = failing_relation.is_none();
    Ok(HomReport {
        relations,
        relations_hold,
        failing_relation,
        image_size,
        target_order: target.order(),
        is_surjective,
        source_order,
        source_error,
        is_isomorphism: relations_hold && is_surjective && source_order == Some(target.order()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{builtin_group, group_algebra};

    fn ex_fq() -> Presentation {
        let rels = vec![
            vec![(1, vec![0, 0, 0, 0])],
            vec![(1, vec![1, 1, 1, 1])],
            vec![(1, vec![0, 0]), (1, vec![1, 1])],
            vec![(1, vec![0, 0]), (1, vec![0, 1]), (1, vec![1, 0]), (1, vec![0, 1, 0])],
        ];
        Presentation::new(2, vec!["u".into(), "v".into()], rels, 12).unwrap()
    }

    #[test]
    fn quaternion_presentation_is_isomorphic() {
        let q8 = builtin_group("Q8").unwrap();
        let r = group_algebra(2, &q8).unwrap();
        let basis = |name: &str| {
            let mut v = vec![0; 8];
            v[q8.index_of(name).unwrap()] = 1;
            v[q8.identity()] = 1;
            Element(v)
        };
        let rep = verify_generated_map(&ex_fq(), &r, &[basis("i"), basis("j")]).unwrap();
        assert!(rep.relations_hold, "{rep:?}");
        assert_eq!(rep.image_size, 256);
        assert_eq!(rep.source_order, Some(256));
        assert!(rep.is_isomorphism);
    }

    #[test]
    fn zero_map_is_not_onto() {
        let r = group_algebra(2, &builtin_group("Q8").unwrap()).unwrap();
        let rep = verify_generated_map(&ex_fq(), &r, &[r.zero(), r.zero()]).unwrap();
        assert!(rep.relations_hold);
        assert_eq!(rep.image_size, 2);
        assert!(!rep.is_surjective && !rep.is_isomorphism);
    }

    #[test]
    fn identity_on_presented_ring() {
        let q = free_quotient(&ex_fq()).unwrap();
        let rep = verify_generated_map(&q.presentation, &q.ring, &q.generator_images).unwrap();
        assert!(rep.is_isomorphism);
    }

    #[test]
    fn failing_relation_is_reported() {
        let r = group_algebra(2, &builtin_group("Q8").unwrap()).unwrap();
        let one = r.one().clone();
        let rep = verify_generated_map(&ex_fq(), &r, &[one.clone(), r.zero()]).unwrap();
        assert_eq!(rep.failing_relation, Some(0));
        assert!(!rep.is_isomorphism);
    }

    #[test]
    fn wrong_image_count() {
        let r = group_algebra(2, &builtin_group("C2").unwrap()).unwrap();
        assert!(matches!(
            verify_generated_map(&ex_fq(), &r, &[r.zero()]),
            Err(VerifyError::ImageCount { expected: 2, got: 1 })
        ));
    }
}

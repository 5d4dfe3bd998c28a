mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use ringforge::dsl;
use ringforge::properties::{check, profile, replay, Backend, PropertyKind};
use ringforge::verify::builtin_corpus;
use ringforge::FiniteRing;

fn ring(text: &str) -> FiniteRing {
    dsl::build(text).unwrap().ring
}

fn verdict(r: &FiniteRing, kind: PropertyKind, backend: Backend) -> bool {
    check(r, kind, backend).unwrap().holds
}

#[test]
fn quaternion_algebra_is_reversible_duo_and_not_symmetric() {
    let r = ring("F2[Q8]");
    for backend in [Backend::Exhaustive, Backend::Linear] {
        assert!(verdict(&r, PropertyKind::Reversible, backend));
        assert!(verdict(&r, PropertyKind::RightDuo, backend));
        assert!(verdict(&r, PropertyKind::LeftDuo, backend));
        let sym = check(&r, PropertyKind::Symmetric, backend).unwrap();
        assert!(!sym.holds);
        assert!(replay(&r, PropertyKind::Symmetric, sym.witness.as_ref().unwrap()));
    }
}

#[test]
fn quaternion_symmetric_witness_from_the_presentation() {
    // uv (uv) != 0 while vu (uv) = 0, so (vu, uv, uv) reorders to a nonzero product.
    let built = dsl::build("F2<u,v>/(u^4, v^4, u^2+v^2, u^2+u*v+v*u+u*v*u)").unwrap();
    let r = &built.ring;
    let el = |t: &str| ringforge::report::parse_elements(&built, t).unwrap().remove(0);
    let (uv, vu) = (el("u*v"), el("v*u"));
    assert!(!r.mul(&uv, &uv).is_zero());
    assert!(r.mul(&vu, &uv).is_zero());
    // a b c = v u (uv) = 0 while b a c = u v (uv) != 0.
    assert!(replay(r, PropertyKind::Symmetric, &[el("v"), el("u"), uv]));
}

#[test]
fn truncated_232_ring_witnesses() {
    let built = dsl::build("F2<u,v>/(u^3, v^3, u^2+v^2+v*u, v*u^2+u*v*u+v*u*v, u^2*v*u)").unwrap();
    let r = &built.ring;
    let el = |t: &str| ringforge::report::parse_elements(&built, t).unwrap().remove(0);
    // uv (u+v) = 0 but vu (u+v) = uvu != 0.
    let (uv, vu, s) = (el("u*v"), el("v*u"), el("u+v"));
    assert!(!uv.is_zero());
    assert!(r.mul(&uv, &s).is_zero());
    assert_eq!(r.mul(&vu, &s), el("u*v*u"));
    assert!(replay(r, PropertyKind::Symmetric, &[el("u"), el("v"), s]));
    assert!(!verdict(r, PropertyKind::Symmetric, Backend::Exhaustive));
    assert!(verdict(r, PropertyKind::Reversible, Backend::Exhaustive));
    // uv is in neither vR nor Ru.
    assert!(replay(r, PropertyKind::RightDuo, &[el("v"), el("u")]));
    assert!(replay(r, PropertyKind::LeftDuo, &[el("u"), el("v")]));
    assert!(!verdict(r, PropertyKind::RightDuo, Backend::Linear));
    assert!(!verdict(r, PropertyKind::LeftDuo, Backend::Linear));
}

#[test]
fn minimal_semicommutative_nonreversible() {
    let r = ring("F2<u,v>/(u^2, v^2, u*v)");
    assert_eq!(r.order(), 16);
    assert!(verdict(&r, PropertyKind::Semicommutative, Backend::Exhaustive));
    let rev = check(&r, PropertyKind::Reversible, Backend::Exhaustive).unwrap();
    assert!(!rev.holds);
    assert!(replay(&r, PropertyKind::Reversible, rev.witness.as_ref().unwrap()));
}

#[test]
fn minimal_nonreduced_symmetric() {
    let r = ring("F2<w,x>/(w^2+w+1, x^2, x*w+w*x+x)");
    assert_eq!(r.order(), 16);
    assert!(verdict(&r, PropertyKind::Symmetric, Backend::Exhaustive));
    assert!(!verdict(&r, PropertyKind::Reduced, Backend::Exhaustive));
    assert!(!verdict(&r, PropertyKind::Commutative, Backend::Exhaustive));
}

#[test]
fn z4_profile_and_matrix_ring() {
    let z4 = ringforge::construct::integers_mod(4).unwrap();
    for res in profile(&z4, Backend::Auto).unwrap() {
        assert_eq!(res.holds, res.kind != PropertyKind::Reduced, "{}", res.kind);
    }
    let m2 = ringforge::construct::matrix_ring(2, 2).unwrap();
    let rev = check(&m2, PropertyKind::Reversible, Backend::Exhaustive).unwrap();
    assert!(!rev.holds);
    let (e, a) = ringforge::properties::idempotent_shortcut(&m2).unwrap();
    assert_eq!(m2.mul(&e, &a), a);
    assert!(m2.mul(&a, &e).is_zero());
}

#[test]
fn local_rings_have_no_shortcut() {
    for text in ["F2[Q8]", "F2<u,v>/(u^2, v^2, u*v)", "F3[C3]"] {
        assert!(ringforge::properties::idempotent_shortcut(&ring(text)).is_none(), "{text}");
    }
    assert!(ringforge::properties::idempotent_shortcut(&ring("F2[S3]")).is_some());
}

#[test]
fn symmetric_formulations_agree_on_small_corpus_rings() {
    for c in builtin_corpus().unwrap().iter().filter(|c| c.ring.prime_field().is_some() && c.ring.order() <= 64) {
        assert_eq!(
            verdict(&c.ring, PropertyKind::Symmetric, Backend::Exhaustive),
            verdict(&c.ring, PropertyKind::Symmetric, Backend::Linear),
            "{}",
            c.name
        );
    }
}

#[test]
fn corpus_rings_satisfy_every_invariant() {
    for c in builtin_corpus().unwrap().iter().filter(|c| c.ring.order() <= 64) {
        assert_eq!(common::ring_violations(&c.name, &c.ring), Vec::<String>::new());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn random_rings_satisfy_every_invariant(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let pool: Vec<FiniteRing> = (0..3).map(|_| common::random_constants(&mut rng)).collect();
        let r = common::random_ring(&mut rng, &pool);
        let violations = common::ring_violations(&format!("seed {seed}"), &r);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }
}

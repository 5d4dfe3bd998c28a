//! Random small rings and the invariants every ring must satisfy.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use ringforge::properties::{replay, Backend, Checker, PropertyKind, PropertyResult};
use ringforge::structure::StructureProfile;
use ringforge::{FiniteRing, RingData};

pub const MAX_ORDER: usize = 81;

const ADDITIVE: &[&[u32]] = &[
    &[2],
    &[3],
    &[2, 2],
    &[3, 3],
    &[2, 2, 2],
    &[3, 3, 3],
    &[2, 2, 2, 2],
    &[3, 3, 3, 3],
    &[2, 2, 2, 2, 2],
    &[2, 2, 2, 2, 2, 2],
    &[4],
    &[4, 2],
    &[4, 4],
    &[4, 2, 2],
    &[8],
    &[8, 2],
    &[9],
    &[9, 3],
];

/// Structure constants with `e_0 = 1`, each drawn until the laws hold.
///
/// Unitriangular draws put `e_i e_j` on basis vectors past `max(i, j)`, so
/// the span of `e_1, ...` is nilpotent; free draws of rank 2 cover the
/// remaining two-dimensional algebras, fields and products included.
pub fn random_constants(rng: &mut impl Rng) -> FiniteRing {
    loop {
        let free = rng.gen_bool(0.3);
        let moduli: Vec<u32> = if free {
            [[2u32, 2], [3, 3], [4, 2], [4, 4]].choose(rng).unwrap().to_vec()
        } else {
            ADDITIVE.choose(rng).unwrap().to_vec()
        };
        let n = moduli.len();
        let density = rng.gen_range(0.2..0.8);
        let mut constants = vec![vec![vec![0u32; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let cell = &mut constants[i][j];
                if i == 0 || j == 0 {
                    cell[i.max(j)] = 1;
                    continue;
                }
                let from = if free { 0 } else { i.max(j) + 1 };
                for (k, c) in cell.iter_mut().enumerate().skip(from) {
                    if rng.gen_bool(density) {
                        *c = rng.gen_range(0..moduli[k]);
                    }
                }
            }
        }
        let mut one = vec![0u32; n];
        one[0] = 1;
        if let Ok(ring) = FiniteRing::from_data(RingData { moduli, constants, one, labels: None }) {
            return ring;
        }
    }
}

/// A random ring of order at most [`MAX_ORDER`]: fresh constants, or a
/// product of two pool members, each possibly replaced by its opposite.
pub fn random_ring(rng: &mut impl Rng, pool: &[FiniteRing]) -> FiniteRing {
    let flip = |rng: &mut dyn rand::RngCore, r: &FiniteRing| if rng.gen_bool(0.5) { r.opposite() } else { r.clone() };
    if pool.len() >= 2 && rng.gen_bool(0.4) {
        for _ in 0..32 {
            let a = pool.choose(rng).unwrap();
            let b = pool.choose(rng).unwrap();
            if a.order() * b.order() <= MAX_ORDER {
                let (a, b) = (flip(rng, a), flip(rng, b));
                return FiniteRing::direct_product(&a, &b).expect("products of rings are rings");
            }
        }
    }
    let r = random_constants(rng);
    flip(rng, &r)
}

fn verdicts(ring: &FiniteRing, backend: Backend) -> Vec<PropertyResult> {
    let ck = Checker::new(ring);
    PropertyKind::ALL.iter().map(|&k| ck.check(k, backend).expect("backend applies")).collect()
}

fn holds(results: &[PropertyResult], kind: PropertyKind) -> bool {
    results.iter().find(|r| r.kind == kind).expect("all nine checked").holds
}

/// Violations of the implication lattice, opposite dualities, local
/// dimension accounting, and witness replay.
pub fn ring_violations(name: &str, ring: &FiniteRing) -> Vec<String> {
    use PropertyKind::*;
    let mut out = Vec::new();
    let backend = Backend::Exhaustive;
    let res = verdicts(ring, backend);
    let h = |k| holds(&res, k);
    let lattice = [
        ("reduced => symmetric", !h(Reduced) || h(Symmetric)),
        ("commutative => symmetric", !h(Commutative) || h(Symmetric)),
        ("symmetric => reversible", !h(Symmetric) || h(Reversible)),
        ("reversible => semicommutative", !h(Reversible) || h(Semicommutative)),
        ("semicommutative => two_primal", !h(Semicommutative) || h(TwoPrimal)),
        ("reversible <=> semicommutative and reflexive", h(Reversible) == (h(Semicommutative) && h(Reflexive))),
    ];
    out.extend(lattice.iter().filter(|(_, ok)| !ok).map(|(what, _)| format!("{name}: {what}")));

    let mut checked = vec![(ring.clone(), res.clone())];
    if ring.prime_field().is_some() {
        checked.push((ring.clone(), verdicts(ring, Backend::Linear)));
    }
    for (r, results) in &checked {
        for res in results {
            match (&res.witness, res.holds) {
                (None, false) => out.push(format!("{name}: {} fails without a witness", res.kind)),
                (Some(_), true) => out.push(format!("{name}: {} holds but has a witness", res.kind)),
                (Some(w), false) if !replay(r, res.kind, w) => {
                    out.push(format!("{name}: {} witness ({}) does not replay", res.kind, res.backend.name()))
                }
                _ => {}
            }
        }
    }

    let op = ring.opposite();
    let op_res = verdicts(&op, backend);
    for kind in PropertyKind::ALL {
        let dual = match kind {
            LeftDuo => RightDuo,
            RightDuo => LeftDuo,
            k => k,
        };
        if holds(&op_res, kind) != h(dual) {
            out.push(format!("{name}: {kind} of the opposite differs from {dual}"));
        }
    }

    let s = StructureProfile::compute(ring).expect("structure");
    let so = StructureProfile::compute(&op).expect("structure");
    if s.d_sequence() != so.d_sequence() || s.chain_sizes() != so.chain_sizes() {
        out.push(format!("{name}: radical layers differ from the opposite"));
    }
    if s.socle_left.size() != so.socle_right.size() || s.socle_right.size() != so.socle_left.size() {
        out.push(format!("{name}: socle sides do not swap under the opposite"));
    }
    if s.is_local() {
        let q = s.residue_field_order().expect("local rings have a residue field") as usize;
        let d = s.d_sequence().expect("local rings have a D-sequence");
        let layers = 1 + d.iter().sum::<u32>();
        if q.pow(layers) != ring.order() {
            out.push(format!("{name}: q^(1 + sum D) = {q}^{layers} but |R| = {}", ring.order()));
        }
    }
    out
}

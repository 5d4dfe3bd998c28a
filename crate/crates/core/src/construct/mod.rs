//! Ring constructors: group algebras over built-in groups, quotients of free
//! algebras by relations, and a few serialized classics.

mod group;
mod poly;
mod quotient;

pub use group::{builtin_group, CayleyGroup};
pub use poly::{NcPoly, Presentation, Word};
pub use quotient::{free_quotient, free_quotient_capped, n_max_from_env, PresentedRing, DEFAULT_N_MAX};

use crate::ring::{is_prime, FiniteRing, RingData, RingError};

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("prime required, got {0}")]
    NotPrime(u64),
    #[error("presentation needs at least one generator")]
    NoGenerators,
    #[error("presentation: {0}")]
    Presentation(String),
    #[error("possibly-infinite-or-cap-too-low: no saturation up to degree {n_max}")]
    NotSaturated { n_max: usize },
    #[error("degenerate presentation: 1 = 0 in the quotient")]
    Degenerate,
    #[error("quotient has {words} normal words, beyond the supported order")]
    TooLarge { words: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The group algebra `F_p[G]` with basis `x_g` in group-element order.
pub fn group_algebra(p: u64, group: &CayleyGroup) -> Result<FiniteRing, BuildError> {
    if !is_prime(p) {
        return Err(BuildError::NotPrime(p));
    }
    let n = group.order();
    let constants = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = vec![0; n];
                    v[group.mul(a, b)] = 1;
                    v
                })
                .collect()
        })
        .collect();
    let mut one = vec![0; n];
    one[group.identity()] = 1;
    let labels = group.names().iter().map(|g| format!("x_{}", label_safe(g))).collect();
    Ok(FiniteRing::from_data(RingData { moduli: vec![p as u32; n], constants, one, labels: Some(labels) })?)
}

/// Group element names as identifier-safe label suffixes (`-i` becomes `mi`).
pub fn label_safe(name: &str) -> String {
    name.replace('-', "m")
}

/// `Z/n`.
pub fn integers_mod(n: u32) -> Result<FiniteRing, BuildError> {
    Ok(FiniteRing::from_data(RingData {
        moduli: vec![n],
        constants: vec![vec![vec![1 % n]]],
        one: vec![1 % n],
        labels: Some(vec!["1".into()]),
    })?)
}

/// `M_n(F_p)` with matrix units `e_ij` in row-major order.
pub fn matrix_ring(p: u32, n: usize) -> Result<FiniteRing, BuildError> {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    matrix_units_ring(p, &units)
}

/// Upper triangular `T_n(F_p)`.
pub fn upper_triangular(p: u32, n: usize) -> Result<FiniteRing, BuildError> {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    matrix_units_ring(p, &units)
}

fn matrix_units_ring(p: u32, units: &[(usize, usize)]) -> Result<FiniteRing, BuildError> {
    if !is_prime(p as u64) {
        return Err(BuildError::NotPrime(p as u64));
    }
    let t = units.len();
    let pos = |i: usize, j: usize| units.iter().position(|&u| u == (i, j));
    let constants = units
        .iter()
        .map(|&(i, j)| {
            units
                .iter()
                .map(|&(k, l)| {
                    let mut v = vec![0; t];
                    if j == k {
                        v[pos(i, l).expect("closed under products")] = 1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let one = units.iter().map(|&(i, j)| u32::from(i == j)).collect();
    let labels = units.iter().map(|&(i, j)| format!("e{}{}", i + 1, j + 1)).collect();
    Ok(FiniteRing::from_data(RingData { moduli: vec![p; t], constants, one, labels: Some(labels) })?)
}

/// `Z/m[x]/(f)` for monic `f`, given by its lower coefficients `f_0..f_{d-1}`.
pub fn polynomial_quotient(m: u32, lower: &[u32]) -> Result<FiniteRing, BuildError> {
    let d = lower.len();
    if d == 0 {
        return Err(BuildError::Presentation("polynomial degree must be positive".into()));
    }
    // x^k for k < 2d - 1 as coefficient vectors in the basis 1, x, ..., x^{d-1}.
    let mut powers: Vec<Vec<u32>> = (0..d)
        .map(|k| {
            let mut v = vec![0; d];
            v[k] = 1 % m;
            v
        })
        .collect();
    while powers.len() < 2 * d - 1 {
        let prev = powers.last().unwrap().clone();
        let top = prev[d - 1] as u64;
        let mut next = vec![0u32; d];
        next[1..d].copy_from_slice(&prev[..d - 1]);
        for k in 0..d {
            let sub = top * lower[k] as u64 % m as u64;
            next[k] = ((next[k] as u64 + m as u64 - sub) % m as u64) as u32;
        }
        powers.push(next);
    }
    let constants = (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect();
    let labels = (0..d)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        })
        .collect();
    Ok(FiniteRing::from_data(RingData { moduli: vec![m; d], constants, one: powers[0].clone(), labels: Some(labels) })?)
}

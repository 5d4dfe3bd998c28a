//! Validation of raw structure constants, valid and not.

use ringforge::ring::validate;
use ringforge::RingData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Z/2 + Z/4 with g1 g1 = g2: 2 (g1 g1) = 2 g2 != 0 although 2 g1 = 0.
    let bad = RingData {
        moduli: vec![2, 4],
        constants: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
        one: vec![1, 0],
        labels: None,
    };
    println!("Z/2 + Z/4, g1^2 = g2: {}", validate(&bad)?);
    // Basis 1, a, b with aa = b, ba = a, ab = 0: (aa)a = a but a(aa) = 0.
    let constants = vec![
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 0, 0]],
    ];
    let skew = RingData { moduli: vec![2, 2, 2], constants, one: vec![1, 0, 0], labels: None };
    println!("non-associative table: {}", validate(&skew)?);
    let z4 = RingData { moduli: vec![4], constants: vec![vec![vec![1]]], one: vec![1], labels: None };
    println!("Z/4: {}", validate(&z4)?);
    Ok(())
}

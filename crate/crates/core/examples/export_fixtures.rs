//! Regenerates the serialized rings in `corpus/fixtures`.
//!
//! `cargo run --example export_fixtures [dir]`

use std::path::PathBuf;

use ringforge::construct::{integers_mod, matrix_ring, polynomial_quotient, upper_triangular};
use ringforge::FiniteRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/fixtures"));
    std::fs::create_dir_all(&dir)?;
    let rings: Vec<(&str, FiniteRing)> = vec![
        ("z4", integers_mod(4)?),
        ("z8", integers_mod(8)?),
        ("z9", integers_mod(9)?),
        // Z/4[x]/(x^2 + 2), a chain ring with J = (x).
        ("z4_chain", polynomial_quotient(4, &[2, 0])?),
        // Galois ring GR(4, 2) = Z/4[x]/(x^2 + x + 1).
        ("gr4_2", polynomial_quotient(4, &[1, 1])?),
        ("m2f2", matrix_ring(2, 2)?),
        ("t2f2", upper_triangular(2, 2)?),
    ];
    for (name, ring) in rings {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, ring.to_json() + "\n")?;
        println!("{} (order {})", path.display(), ring.order());
    }
    Ok(())
}

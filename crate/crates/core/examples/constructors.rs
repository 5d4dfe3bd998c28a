//! The ring constructors: integers mod n, group algebras, matrix and
//! triangular rings, polynomial quotients, products and opposites.

use ringforge::construct::{
    builtin_group, group_algebra, integers_mod, matrix_ring, polynomial_quotient, upper_triangular,
};
use ringforge::FiniteRing;

fn show(name: &str, r: &FiniteRing) {
    println!(
        "{name:<24} order {:<5} characteristic {:<3} additive {:?}",
        r.order(),
        r.characteristic(),
        r.additive().moduli()
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("Z/4", &integers_mod(4)?);
    for g in ["Q8", "S3", "D4", "C4"] {
        show(&format!("F2[{g}]"), &group_algebra(2, &builtin_group(g)?)?);
    }
    show("F3[C2]", &group_algebra(3, &builtin_group("C2")?)?);
    show("M2(F2)", &matrix_ring(2, 2)?);
    show("T2(F3)", &upper_triangular(3, 2)?);
    // Z/4[x]/(x^2 + x + 1), the Galois ring of order 16.
    let gr = polynomial_quotient(4, &[1, 1])?;
    show("GR(4, 2)", &gr);
    let prod = FiniteRing::direct_product(&integers_mod(2)?, &integers_mod(3)?)?;
    show("Z/2 x Z/3", &prod);
    let t2 = upper_triangular(2, 2)?;
    let op = t2.opposite();
    println!("op(op(T2(F2))) == T2(F2): {}", op.opposite().to_data() == t2.to_data());
    Ok(())
}

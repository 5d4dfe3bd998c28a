//! Units, radical powers, socles, idempotents and D-sequences.

use ringforge::dsl;
use ringforge::structure::StructureProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for expr in ["F2[Q8]", "F2[S3]", "F2<u,v>/(u^2, v^2, u*v)", "prod(F2[C2], F3[C2])", "F2[C4]"] {
        let ring = dsl::build(expr)?.ring;
        let s = StructureProfile::compute(&ring)?;
        println!("{expr}");
        println!("  units {} of {}, |J| = {}, chain {:?}", s.units_count(), s.order, s.radical.size(), s.chain_sizes());
        println!("  socle left {} right {}", s.socle_left.size(), s.socle_right.size());
        println!(
            "  idempotents {} ({} central), indecomposable {}",
            s.idempotent_count, s.central_idempotent_count, s.is_indecomposable
        );
        match s.d_sequence() {
            Some(d) => println!(
                "  local, residue field {}, D = {d:?}, nilpotency {}",
                s.residue_field_order().unwrap_or(0),
                s.nilpotency_index
            ),
            None => println!("  not local"),
        }
    }
    Ok(())
}

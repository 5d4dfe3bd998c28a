//! Checks single properties with both backends and replays each witness
//! through plain multiplication.

use ringforge::dsl;
use ringforge::properties::{check, replay, Backend, PropertyKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for expr in ["F2[Q8]", "F2<u,v>/(u^2, v^2, u*v)", "F2[S3]"] {
        let ring = dsl::build(expr)?.ring;
        println!("{expr}");
        for kind in [PropertyKind::Reversible, PropertyKind::Symmetric, PropertyKind::RightDuo] {
            for backend in [Backend::Exhaustive, Backend::Linear] {
                let res = check(&ring, kind, backend)?;
                let witness = match &res.witness {
                    Some(w) => {
                        let shown: Vec<String> = w.iter().map(|x| ring.render(x)).collect();
                        format!("witness ({}), replays: {}", shown.join("; "), replay(&ring, kind, w))
                    }
                    None => String::new(),
                };
                println!("  {kind:<11} {:<10} {:<5} {witness}", backend.name(), res.holds);
            }
        }
    }
    Ok(())
}

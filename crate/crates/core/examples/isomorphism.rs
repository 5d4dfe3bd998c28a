//! Checks that generator images define an isomorphism from a presentation
//! onto a target ring.

use ringforge::dsl::{self, RingExpr};
use ringforge::report::parse_elements;
use ringforge::verify::verify_generated_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = "F2<u,v>/(u^4, v^4, u^2+v^2, u^2+u*v+v*u+u*v*u)";
    let RingExpr::FreeQuotient { p, gens, relations } = dsl::parse_ring_expr(source)? else {
        return Err("expected a presentation".into());
    };
    let pres = dsl::presentation(p, &gens, &relations, 12)?;
    let target = dsl::build("F2[Q8]")?;
    for images in ["1 + x_i, 1 + x_j", "0, 0"] {
        let elems = parse_elements(&target, images)?;
        let rep = verify_generated_map(&pres, &target.ring, &elems)?;
        println!("u, v -> {images}");
        for r in &rep.relations {
            println!("  {:<28} {}", r.relation, if r.holds { "vanishes" } else { "fails" });
        }
        println!("  image {} of {}, isomorphism {}", rep.image_size, rep.target_order, rep.is_isomorphism);
    }
    Ok(())
}

//! Free-algebra quotients: normal words, saturation degree, and the
//! generator images in the resulting ring.
//!
//! `cargo run --example presentation -- "F2<u,v>/(u^2, v^2, u*v)"`

use ringforge::dsl;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "F2<w,x>/(w^2+w+1, x^2, x*w+w*x+x)".into());
    let built = dsl::build(&text)?;
    let q = built.presented.as_ref().ok_or("not a presentation")?;
    let names = q.presentation.generators();
    let words: Vec<String> = q.normal_words.iter().map(|w| w.render(names)).collect();
    println!("{text}");
    println!("saturated at degree {}", q.saturation_degree);
    println!("{} normal words: {}", words.len(), words.join(", "));
    println!("order {}", q.ring.order());
    for r in q.presentation.relations() {
        println!("relation {} evaluates to zero: {}", r.render(names, true), q.evaluate(r).is_zero());
    }
    for w in built.warnings() {
        println!("warning: {w}");
    }
    Ok(())
}

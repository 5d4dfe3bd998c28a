//! Structure and property report for a ring expression.
//!
//! `cargo run --example analyze -- "F2[Q8]" [--json]`

use ringforge::report::{analyze, AnalyzeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let expr = args.next().unwrap_or_else(|| "F2[Q8]".into());
    let json = args.any(|a| a == "--json");
    let report = analyze(&expr, &AnalyzeOptions::default())?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    Ok(())
}

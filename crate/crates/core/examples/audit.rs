//! The statement audit over the shipped corpus, or a manifest given as the
//! first argument.

use ringforge::verify::{builtin_corpus, load_manifest, statement_audit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = match std::env::args().nth(1) {
        Some(path) => load_manifest(path.as_ref())?,
        None => builtin_corpus()?,
    };
    let report = statement_audit(&corpus)?;
    print!("{}", report.to_table());
    Ok(())
}

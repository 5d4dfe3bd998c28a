//! A presentation search over a slice of a configured space, split into
//! shards, interrupted, resumed and merged.
//!
//! `cargo run --release --example search -- [config.json] [start end]`

use ringforge::search::{merge_shards, run_shard, summarize, RunOptions, SearchConfig, Shard};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map_or(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/d232.json"), |s| s.as_str());
    let mut cfg = SearchConfig::load(path.as_ref())?;
    let start = args.get(1).map_or(Ok(27_126_000), |s| s.parse())?;
    let end = args.get(2).map_or(Ok(27_136_000), |s| s.parse())?;
    cfg.range = Some([start, end]);
    cfg.batch_size = 1000;
    let dir = std::env::temp_dir().join("ringforge-search-example");
    for index in 0..2 {
        let mut opts = RunOptions::new(&dir);
        opts.shard = Shard { index, count: 2 };
        // Stop the first shard early, then pick it up again.
        opts.stop_after_batches = (index == 0).then_some(2);
        let first = run_shard(&cfg, &opts)?;
        if !first.checkpoint.complete() {
            println!("shard {} stopped at {}", opts.shard, first.checkpoint.next_index);
            opts.stop_after_batches = None;
            opts.resume = true;
            run_shard(&cfg, &opts)?;
        }
    }
    let (findings, stats) = merge_shards(&cfg, &dir, 2)?;
    print!("{}", summarize(&cfg, &findings, &stats)?.to_text());
    for f in findings.iter().take(3) {
        println!("#{} {}", f.index, f.presentation);
    }
    Ok(())
}

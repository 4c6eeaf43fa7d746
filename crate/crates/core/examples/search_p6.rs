//! Resumable p=6 search. Stops after two chunks, then resumes from the
//! checkpoint and prints the ranked table.

use crcsel::search::{run_search, run_search_until, SearchConfig};

fn main() -> crcsel::error::Result<()> {
    let dir = std::env::temp_dir().join(format!("crcsel-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut cfg = SearchConfig::new(6, 18, 25);
    cfg.chunk_size = 4;
    cfg.top_k = 32;
    cfg.checkpoint = Some(dir.join("p6.jsonl"));

    run_search_until(&cfg, Some(2))?;
    let report = run_search(&cfg)?;
    println!("resumed {} candidates", report.timings.resumed_candidates);
    print!("{}", report.to_table());
    println!("hash {}", report.ranked_hash);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

//! Validate and reflect over a manifest on several workers, with a
//! checkpoint file, and print the LCS-ratio histogram.
//!
//! ```bash
//! cargo run -p ccskit --example batch_run
//! ```

use std::path::Path;

use ccskit::pipeline::{run_batch, BatchConfig, ReplayClient};

fn main() -> anyhow::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let client = ReplayClient::open(fixtures.join("transcript.jsonl"))?;
    let checkpoint = std::env::temp_dir().join("ccskit-batch-example.jsonl");
    let _ = std::fs::remove_file(&checkpoint);
    let config = BatchConfig { workers: 4, checkpoint: Some(checkpoint.clone()), ..Default::default() };

    let report = run_batch(&fixtures.join("batch/manifest.jsonl"), &client, &config)?;
    for s in &report.samples {
        match (&s.error, s.ratio) {
            (Some(e), _) => println!("{:<6} error: {e}", s.id),
            (None, Some(r)) => println!("{:<6} {r:.3} accepted {}", s.id, s.accepted),
            (None, None) => println!("{:<6} no score", s.id),
        }
    }
    println!("{}", report.histogram_table());

    // a rerun only repeats samples that failed
    let again = run_batch(&fixtures.join("batch/manifest.jsonl"), &client, &config)?;
    assert_eq!(again.summary, report.summary);
    std::fs::remove_file(checkpoint)?;
    Ok(())
}

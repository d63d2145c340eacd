//! Reverse validation and the reflection loop, driven by a recorded
//! transcript so the run is offline and repeatable.
//!
//! ```bash
//! cargo run -p ccskit --example reflection_replay
//! ```

use std::path::Path;

use ccskit::ccs::parse_ccs;
use ccskit::pipeline::{reflect_optimize, QualityConfig, ReplayClient};

fn main() -> anyhow::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let client = ReplayClient::open(fixtures.join("transcript.jsonl"))?;
    let gt = parse_ccs(&std::fs::read_to_string(fixtures.join("comparison/gt.ccs"))?)?;
    let description = std::fs::read_to_string(fixtures.join("comparison/description_0.txt"))?;

    let outcome = reflect_optimize(&description, &gt, &client, &QualityConfig::default())?;
    for (i, round) in outcome.rounds.iter().enumerate() {
        println!("round {i}: LCS ratio {:.3}, accepted {}", round.lcs_ratio, round.accepted);
        if let Some(issues) = &round.issues {
            for line in issues.lines().take(4) {
                println!("    {line}");
            }
        }
    }
    println!("retries used: {}, final accepted: {}", outcome.retries_used, outcome.final_accepted);
    Ok(())
}

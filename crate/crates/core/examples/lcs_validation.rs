//! Score a regenerated sequence against its ground truth with the LCS ratio
//! at parameter and command granularity.
//!
//! ```bash
//! cargo run -p ccskit --example lcs_validation
//! ```

use ccskit::ccs::{parse_ccs, Granularity};
use ccskit::metrics::sequence_lcs;
use ccskit::pipeline::{issues_text, ACCEPT_THRESHOLD};

const GROUND_TRUTH: &str = "<SOL>
<Arc>: x=160, y=96, α=128, f=1
<Line>: x=160, y=160
<Arc>: x=96, y=160, α=128, f=1
<Line>: x=96, y=96
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=144, e2=128, b=NewBodyFeatureOperation, u=SymmetricFeatureExtentType
<EOS>";

const REGENERATED: &str = "<SOL>
<Arc>: x=160, y=96, α=128, f=0
<Line>: x=160, y=160
<Arc>: x=96, y=160, α=128, f=0
<Line>: x=96, y=96
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=150, e2=128, b=NewBodyFeatureOperation, u=SymmetricFeatureExtentType
<EOS>";

fn main() -> anyhow::Result<()> {
    let gt = parse_ccs(GROUND_TRUTH)?;
    let regenerated = parse_ccs(REGENERATED)?;
    for granularity in [Granularity::Parameter, Granularity::Command] {
        let r = sequence_lcs(&gt, &regenerated, granularity)?;
        println!(
            "{granularity:?}: {}/{} = {:.4} ({})",
            r.lcs_length,
            r.ground_truth_length,
            r.ratio,
            if r.ratio >= ACCEPT_THRESHOLD { "accepted" } else { "rejected" }
        );
    }
    println!("{}", issues_text(&gt, &regenerated));
    Ok(())
}

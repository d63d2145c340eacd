//! Per-type accuracy, F1 and AUC over predictions with confidence scores.
//!
//! ```bash
//! cargo run -p ccskit --example command_metrics
//! ```

use ccskit::ccs::{parse_ccs, CadSequence, Command};
use ccskit::metrics::{command_metrics, ConfidenceTrack, PredictionRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPES: [&str; 3] = [
    "<SOL>\n<Line>: x=160, y=96\n<Line>: x=160, y=160\n<Line>: x=96, y=160\n<Line>: x=96, y=96\n<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=192, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType\n<EOS>",
    "<SOL>\n<Circle>: x=128, y=128, r=47\n<SOL>\n<Circle>: x=128, y=128, r=40\n<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=160, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType\n<EOS>",
    "<SOL>\n<Arc>: x=160, y=96, α=128, f=1\n<Line>: x=160, y=160\n<Arc>: x=96, y=160, α=128, f=1\n<Line>: x=96, y=96\n<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=144, e2=128, b=NewBodyFeatureOperation, u=SymmetricFeatureExtentType\n<EOS>",
];

/// Swaps some curve commands for another curve type and lowers their confidence.
fn perturb(gt: &CadSequence, rng: &mut ChaCha8Rng) -> (CadSequence, ConfidenceTrack) {
    let mut scores = Vec::new();
    let predicted = gt
        .iter()
        .map(|c| {
            let swap = rng.random::<f64>() < 0.25;
            let changed = match (*c, swap) {
                (Command::Line { x, y }, true) => Command::Arc { x, y, alpha: 64, ccw: true },
                (Command::Arc { x, y, .. }, true) => Command::Line { x, y },
                (Command::Circle { x, y, r }, true) => Command::Circle { x, y, r: r / 2 },
                (other, _) => other,
            };
            let s = if changed == *c { rng.random_range(0.9..1.0) } else { rng.random_range(0.4..0.95) };
            scores.push([s, s]);
            changed
        })
        .collect();
    (predicted, ConfidenceTrack::new(scores).expect("scores in range"))
}

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut records = Vec::new();
    for i in 0..300 {
        let gt = parse_ccs(SHAPES[i % SHAPES.len()])?;
        let (predicted, confidence) = perturb(&gt, &mut rng);
        records.push(PredictionRecord::new(gt, predicted, confidence)?.with_id(format!("s{i}")));
    }
    let report = command_metrics(&records)?;
    println!("{report}");
    Ok(())
}

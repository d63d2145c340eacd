//! Flag low-confidence commands in a prediction and request a correction.
//!
//! ```bash
//! cargo run -p ccskit --example confidence_correction
//! ```

use ccskit::ccs::{parse_ccs, serialize_ccs};
use ccskit::metrics::ConfidenceTrack;
use ccskit::pipeline::{flag_low_confidence, request_correction, MockClient, Task, CONFIDENCE_THRESHOLD};

const PREDICTED: &str = "<SOL>
<Circle>: x=128, y=128, r=47
<SOL>
<Circle>: x=128, y=128, r=52
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=160, e2=128, b=JoinFeatureOperation, u=OneSideFeatureExtentType
<EOS>";

fn main() -> anyhow::Result<()> {
    let predicted = parse_ccs(PREDICTED)?;
    let confidence =
        ConfidenceTrack::new(vec![[1.0, 1.0], [0.99, 0.995], [0.999, 1.0], [0.99, 0.62], [0.97, 0.91], [1.0, 1.0]])?;
    let request =
        flag_low_confidence("A ring of radius 47 with a 40 hole.", &predicted, &confidence, CONFIDENCE_THRESHOLD)?;
    println!("flagged commands: {:?}", request.flagged_positions);

    // stand-in generator that repairs the flagged commands
    let client = MockClient::from_fn(|req| {
        assert_eq!(req.task, Task::Correct);
        Ok(req.field("predicted").replace("r=52", "r=40").replace("JoinFeature", "NewBodyFeature"))
    });
    let corrected = request_correction(&request, &client)?;
    println!("{}", serialize_ccs(&corrected));
    Ok(())
}

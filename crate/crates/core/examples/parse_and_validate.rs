//! Parse a CCS listing, check it, and convert it to JSON and back.
//!
//! ```bash
//! cargo run -p ccskit --example parse_and_validate [file.ccs]
//! ```

use ccskit::ccs::{from_json, parse_ccs, serialize_ccs, to_json, validate};

const PLATE: &str = "<SOL>
<Arc>: x=144, y=112, α=64, f=1
<Line>: x=207, y=112
<Arc>: x=223, y=128, α=64, f=1
<Line>: x=128, y=128
<Extrude>: θ=192, φ=64, γ=192, px=105, py=121, pz=40, s=46, e1=148, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType
<EOS>";

fn main() -> anyhow::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => PLATE.to_string(),
    };
    let seq = parse_ccs(&text)?;
    println!("{} commands", seq.len());
    println!("{}", serialize_ccs(&seq));

    let report = validate(&seq);
    if report.ok {
        println!("valid");
    }
    for issue in &report.issues {
        println!("command {}: {}: {}", issue.position, issue.code, issue.message);
    }

    let json = to_json(&seq);
    assert_eq!(from_json(&json)?, seq);
    println!("{json}");

    // parameter values are checked against their ranges
    if let Err(e) = parse_ccs("<Line>: x=300, y=0") {
        println!("rejected: {e}");
    }
    Ok(())
}

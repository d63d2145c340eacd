mod common;

use ccskit::ccs::{from_json, parse_ccs, serialize_ccs, to_json, validate, CadSequence, Command, ParseError};
use common::*;
use proptest::prelude::*;

#[test]
fn text_round_trip_over_random_corpus() {
    let mut rng = rng(42);
    for _ in 0..10_000 {
        let seq = random_sequence(&mut rng, 24);
        let text = serialize_ccs(&seq);
        assert_eq!(parse_ccs(&text).unwrap(), seq, "{text}");
        assert_eq!(serialize_ccs(&parse_ccs(&text).unwrap()), text);
    }
}

#[test]
fn json_round_trip_over_random_corpus() {
    let mut rng = rng(43);
    for _ in 0..2_000 {
        let seq = random_sequence(&mut rng, 24);
        assert_eq!(from_json(&to_json(&seq)).unwrap(), seq);
    }
}

#[test]
fn fixture_listings_round_trip_and_validate() {
    for rel in [
        "comparison/gt.ccs",
        "comparison/round0.ccs",
        "comparison/round1.ccs",
        "batch/gt/cube.ccs",
        "batch/gt/disc.ccs",
        "batch/gt/ring.ccs",
        "batch/gt/slot.ccs",
    ] {
        let text = read_fixture(rel);
        let seq = parse_ccs(&text).unwrap();
        assert_eq!(serialize_ccs(&seq), text.trim_end(), "{rel}");
        assert!(validate(&seq).ok, "{rel}: {:?}", validate(&seq).issues);
    }
}

#[test]
fn latex_listing_parses_to_canonical_form() {
    // typeset form of the comparison ground truth as it appears in tables
    let latex = read_fixture("comparison/gt.ccs")
        .replace("α=", "$\\alpha$=")
        .replace("θ=", "$\\theta$=")
        .replace("φ=", "$\\varphi$=")
        .replace("γ=", "$\\gamma$=");
    let seq = parse_ccs(&latex).unwrap();
    assert_eq!(seq, seq_fixture("comparison/gt.ccs"));
    assert_eq!(seq.len(), 20);
}

#[test]
fn ascii_names_reordered_params_and_loose_spacing() {
    let a = parse_ccs("<Arc>:  f=0,alpha=200 ,  y=3, x=4\n\n  <EOS>  ").unwrap();
    assert_eq!(a.commands()[0], Command::Arc { x: 4, y: 3, alpha: 200, ccw: false });
    let e = parse_ccs("<Extrude>: theta=1, phi=2, gamma=3, px=4, py=5, pz=6, s=7, e1=8, e2=9, b=9, u=3").unwrap();
    assert_eq!(
        serialize_ccs(&e),
        "<Extrude>: θ=1, φ=2, γ=3, px=4, py=5, pz=6, s=7, e1=8, e2=9, b=CutFeatureOperation, u=TwoSidesFeatureExtentType"
    );
}

#[test]
fn error_positions() {
    match parse_ccs("<SOL>\n<Circle>: x=1, y=2, r=300") {
        Err(ParseError::Range { line, param, value, .. }) => {
            assert_eq!((line, param, value), (2, "r", 300));
        }
        other => panic!("{other:?}"),
    }
    match parse_ccs("<SOL>\n<Circle>: x=1, y=2") {
        Err(e @ ParseError::Syntax { line: 2, .. }) => assert_eq!(e.code(), "SyntaxError"),
        other => panic!("{other:?}"),
    }
    assert!(parse_ccs("<Arc>: x=1, y=2, α=3, f=2").is_err());
    assert!(parse_ccs("<Line>: x=1, x=2").is_err());
}

proptest! {
    #[test]
    fn any_sequence_survives_both_encodings(seed in any::<u64>()) {
        let seq: CadSequence = random_sequence(&mut rng(seed), 40);
        prop_assert_eq!(&parse_ccs(&serialize_ccs(&seq)).unwrap(), &seq);
        prop_assert_eq!(&from_json(&to_json(&seq)).unwrap(), &seq);
    }
}

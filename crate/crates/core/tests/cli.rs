mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn ccskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccskit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_prints_canonical_text_and_json() {
    let gt = fixture("comparison/gt.ccs");
    let out = ccskit(&["parse", path(&gt)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), read_fixture("comparison/gt.ccs").trim_end());

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("gt.json");
    let out = ccskit(&["parse", "--json", path(&gt)]);
    std::fs::write(&json, out.stdout).unwrap();
    let back = ccskit(&["parse", path(&json)]);
    assert_eq!(stdout(&back).trim_end(), read_fixture("comparison/gt.ccs").trim_end());
}

#[test]
fn validate_sets_the_exit_code() {
    assert_eq!(ccskit(&["validate", path(&fixture("batch/gt/ring.ccs"))]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let open = dir.path().join("open.ccs");
    std::fs::write(&open, "<SOL>\n<Line>: x=1, y=1\n<EOS>").unwrap();
    let out = ccskit(&["validate", path(&open)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("command"));
    let missing = ccskit(&["validate", "/nonexistent.ccs"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn mesh_and_sample() {
    let dir = tempfile::tempdir().unwrap();
    let stl = dir.path().join("ring.stl");
    let out = ccskit(&["mesh", path(&fixture("batch/gt/ring.ccs")), "-o", path(&stl), "--resolution", "48"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("watertight true"));
    let bytes = std::fs::read(&stl).unwrap();
    let k = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 84 + 50 * k);

    let xyz = dir.path().join("ring.xyz");
    assert!(ccskit(&["sample", path(&stl), "-o", path(&xyz), "--n", "8000", "--seed", "3"]).status.success());
    let text = std::fs::read_to_string(&xyz).unwrap();
    assert_eq!(text.lines().count(), 8000);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 3));

    let bin = dir.path().join("ring.bin");
    let ring = fixture("batch/gt/ring.ccs");
    let from_seq = ["sample", path(&ring), "-o", path(&bin), "--n", "100", "--format", "bin"];
    assert!(ccskit(&from_seq).status.success());
    assert_eq!(std::fs::read(&bin).unwrap().len(), 8 + 100 * 12);
}

#[test]
fn eval_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let ring = read_fixture("batch/gt/ring.ccs");
    let disc = read_fixture("batch/gt/disc.ccs");
    let conf = |n: usize| vec![[0.9, 0.9]; n];
    let lines = [
        serde_json::json!({"id": "a", "gt_ccs": ring, "pred_ccs": ring, "confidence": conf(6)}),
        serde_json::json!({"id": "b", "gt_ccs": disc, "pred_ccs": ring, "confidence": conf(6)}),
    ];
    std::fs::write(&records, lines.iter().map(|l| format!("{l}\n")).collect::<String>()).unwrap();

    let cloud = dir.path().join("c.xyz");
    assert!(ccskit(&[
        "sample",
        path(&fixture("batch/gt/cube.ccs")),
        "-o",
        path(&cloud),
        "--n",
        "500",
        "--resolution",
        "32"
    ])
    .status
    .success());
    let out = ccskit(&["eval", path(&records), "--reference", path(&cloud), "--generated", path(&cloud), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["records"], 2);
    assert_eq!(report["shape"]["cd"], 0.0);
    assert_eq!(report["shape"]["jsd"], 0.0);

    let table = stdout(&ccskit(&["eval", path(&records)]));
    assert!(table.contains("Avg ACC"), "{table}");
}

#[test]
fn reflect_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let manifest = fixture("batch/manifest.jsonl");
    let transcript = fixture("transcript.jsonl");
    let out = ccskit(&[
        "reflect",
        path(&manifest),
        "--client",
        "replay",
        "--transcript",
        path(&transcript),
        "--workers",
        "3",
        "-o",
        path(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["summary"]["accepted"], 4);
    assert_eq!(parsed["summary"]["errors"], 1);

    let stats = ccskit(&["stats", "--json", path(&report)]);
    let summary: serde_json::Value = serde_json::from_slice(&stats.stdout).unwrap();
    assert_eq!(summary, parsed["summary"]);

    let mock = ccskit(&["reflect", path(&manifest), "--client", "mock", "--no-reflect"]);
    let parsed: serde_json::Value = serde_json::from_slice(&mock.stdout).unwrap();
    assert_eq!(parsed["summary"]["accepted"], 5);

    let no_transcript = ccskit(&["reflect", path(&manifest)]);
    assert_eq!(no_transcript.status.code(), Some(2));
}

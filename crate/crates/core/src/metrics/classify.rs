use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::ccs::{from_json, parse_ccs, CadSequence, CommandType};

/// Per-command `(s_cmd, s_args)` confidence scores of a predicted sequence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ConfidenceTrack {
    entries: Vec<[f64; 2]>,
}

impl ConfidenceTrack {
    pub fn new(entries: Vec<[f64; 2]>) -> Result<Self, MetricsError> {
        for (i, e) in entries.iter().enumerate() {
            if !e.iter().all(|s| (0.0..=1.0).contains(s)) {
                return Err(MetricsError::InvalidArgument(format!("confidence {i} out of [0, 1]: {e:?}")));
            }
        }
        Ok(ConfidenceTrack { entries })
    }

    /// Every command scored `(s, s)`.
    pub fn uniform(len: usize, s: f64) -> Result<Self, MetricsError> {
        Self::new(vec![[s, s]; len])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn s_cmd(&self, i: usize) -> f64 {
        self.entries[i][0]
    }

    pub fn s_args(&self, i: usize) -> f64 {
        self.entries[i][1]
    }

    pub fn entries(&self) -> &[[f64; 2]] {
        &self.entries
    }
}

impl TryFrom<Vec<[f64; 2]>> for ConfidenceTrack {
    type Error = MetricsError;

    fn try_from(entries: Vec<[f64; 2]>) -> Result<Self, Self::Error> {
        Self::new(entries)
    }
}

impl From<ConfidenceTrack> for Vec<[f64; 2]> {
    fn from(track: ConfidenceTrack) -> Self {
        track.entries
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionRecord {
    pub id: Option<String>,
    pub ground_truth: CadSequence,
    pub predicted: CadSequence,
    pub confidence: ConfidenceTrack,
}

impl PredictionRecord {
    pub fn new(
        ground_truth: CadSequence,
        predicted: CadSequence,
        confidence: ConfidenceTrack,
    ) -> Result<Self, MetricsError> {
        if confidence.len() != predicted.len() {
            return Err(MetricsError::Alignment { expected: predicted.len(), found: confidence.len() });
        }
        Ok(PredictionRecord { id: None, ground_truth, predicted, confidence })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }
}

/// A sequence field in a record file: CCS text or the JSON mirror object.
#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceField {
    Text(String),
    Json(serde_json::Value),
}

impl SequenceField {
    fn decode(self) -> Result<CadSequence, String> {
        match self {
            SequenceField::Text(t) => parse_ccs(&t).map_err(|e| e.to_string()),
            SequenceField::Json(v) => from_json(&v.to_string()).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    gt_ccs: SequenceField,
    pred_ccs: SequenceField,
    confidence: ConfidenceTrack,
}

/// Reads `{id, gt_ccs, pred_ccs, confidence}` objects, one per line.
pub fn read_records<R: BufRead>(source: R) -> Result<Vec<PredictionRecord>, MetricsError> {
    let mut out = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line.map_err(|e| MetricsError::Record { line: n + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| MetricsError::Record { line: n + 1, message };
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        let gt = raw.gt_ccs.decode().map_err(|e| bad(format!("gt_ccs: {e}")))?;
        let pred = raw.pred_ccs.decode().map_err(|e| bad(format!("pred_ccs: {e}")))?;
        let mut record = PredictionRecord::new(gt, pred, raw.confidence).map_err(|e| bad(e.to_string()))?;
        record.id = raw.id;
        out.push(record);
    }
    Ok(out)
}

/// The command types scored per type and averaged in the macro columns.
pub const SCORED_TYPES: [CommandType; 4] =
    [CommandType::Line, CommandType::Arc, CommandType::Circle, CommandType::Extrude];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeMetrics {
    /// Ground-truth positions of this type.
    pub support: usize,
    pub accuracy: f64,
    /// `None` when the type is neither present nor predicted.
    pub f1: Option<f64>,
    /// `None` when every position has the same label.
    pub auc: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeMetrics {
    pub cd: f64,
    pub mmd: f64,
    pub jsd: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub records: usize,
    pub positions: usize,
    pub per_type: BTreeMap<String, TypeMetrics>,
    pub macro_accuracy: f64,
    pub macro_f1: Option<f64>,
    pub macro_auc: Option<f64>,
    /// Fraction of aligned positions whose predicted type is exactly right.
    pub command_accuracy: f64,
    /// Exact quantized parameter matches among type-matched commands.
    pub parameter_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeMetrics>,
}

/// One aligned ground-truth position.
#[derive(Clone, Copy, Debug)]
struct Slot {
    truth: CommandType,
    /// `None` is the padding type past the end of the prediction.
    predicted: Option<CommandType>,
    s_cmd: f64,
}

/// Ranking key of a slot for one-vs-rest scoring of `t`: slots predicted as
/// `t` rank above all others, ordered by confidence; other slots rank by
/// falling confidence in their own type; padding ranks last. Only the order
/// of `s_cmd` matters, so the AUC is a pure rank statistic.
fn rank_key(slot: &Slot, t: CommandType) -> (u8, f64) {
    match slot.predicted {
        Some(p) if p == t => (2, slot.s_cmd),
        Some(_) => (1, -slot.s_cmd),
        None => (0, 0.0),
    }
}

fn cmp_key(a: &(u8, f64), b: &(u8, f64)) -> Ordering {
    a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Mann-Whitney AUC: probability that a random positive outranks a random
/// negative, ties counted half.
pub(crate) fn mann_whitney_auc(scored: &mut [((u8, f64), bool)]) -> Option<f64> {
    let positives = scored.iter().filter(|s| s.1).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return None;
    }
    scored.sort_by(|a, b| cmp_key(&a.0, &b.0));
    let mut wins = 0.0;
    let mut below = 0usize;
    let mut i = 0;
    while i < scored.len() {
        let mut j = i;
        while j < scored.len() && cmp_key(&scored[j].0, &scored[i].0) == Ordering::Equal {
            j += 1;
        }
        let pos = scored[i..j].iter().filter(|s| s.1).count();
        let neg = (j - i) - pos;
        wins += pos as f64 * below as f64 + 0.5 * pos as f64 * neg as f64;
        below += neg;
        i = j;
    }
    Some(wins / (positives as f64 * negatives as f64))
}

fn align(record: &PredictionRecord) -> (Vec<Slot>, usize, usize) {
    let predicted = record.predicted.commands();
    let mut params_total = 0;
    let mut params_matched = 0;
    let slots = record
        .ground_truth
        .iter()
        .enumerate()
        .map(|(i, truth)| {
            let pred = predicted.get(i);
            if let Some(p) = pred.filter(|p| p.kind() == truth.kind()) {
                for ((_, a), (_, b)) in truth.params().iter().zip(p.params().iter()) {
                    params_total += 1;
                    params_matched += usize::from(a == b);
                }
            }
            Slot {
                truth: truth.kind(),
                predicted: pred.map(|p| p.kind()),
                s_cmd: if pred.is_some() { record.confidence.s_cmd(i) } else { 0.0 },
            }
        })
        .collect();
    (slots, params_total, params_matched)
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Per-type accuracy, F1 and AUC over positionally aligned commands.
///
/// Predictions are truncated or padded to the ground-truth length. Every
/// aligned position, including `SOL` and `EOS`, counts as one instance of
/// each one-vs-rest problem.
pub fn command_metrics(records: &[PredictionRecord]) -> Result<MetricsReport, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    for r in records {
        if r.confidence.len() != r.predicted.len() {
            return Err(MetricsError::Alignment { expected: r.predicted.len(), found: r.confidence.len() });
        }
    }
    let aligned: Vec<_> = records.par_iter().map(align).collect();
    let slots: Vec<Slot> = aligned.iter().flat_map(|a| a.0.iter().copied()).collect();
    let params_total: usize = aligned.iter().map(|a| a.1).sum();
    let params_matched: usize = aligned.iter().map(|a| a.2).sum();
    let n = slots.len();
    if n == 0 {
        return Err(MetricsError::EmptyInput);
    }

    let per_type: Vec<(CommandType, TypeMetrics)> = SCORED_TYPES
        .par_iter()
        .map(|&t| {
            let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
            for s in &slots {
                match (s.truth == t, s.predicted == Some(t)) {
                    (true, true) => tp += 1,
                    (false, true) => fp += 1,
                    (true, false) => fn_ += 1,
                    (false, false) => {}
                }
            }
            let tn = n - tp - fp - fn_;
            let denom = 2 * tp + fp + fn_;
            let mut scored: Vec<_> = slots.iter().map(|s| (rank_key(s, t), s.truth == t)).collect();
            let metrics = TypeMetrics {
                support: tp + fn_,
                accuracy: (tp + tn) as f64 / n as f64,
                f1: (denom > 0).then(|| 2.0 * tp as f64 / denom as f64),
                auc: mann_whitney_auc(&mut scored),
            };
            (t, metrics)
        })
        .collect();

    let correct = slots.iter().filter(|s| s.predicted == Some(s.truth)).count();
    Ok(MetricsReport {
        records: records.len(),
        positions: n,
        macro_accuracy: mean(per_type.iter().map(|(_, m)| m.accuracy)).expect("four types"),
        macro_f1: mean(per_type.iter().filter_map(|(_, m)| m.f1)),
        macro_auc: mean(per_type.iter().filter_map(|(_, m)| m.auc)),
        per_type: per_type.into_iter().map(|(t, m)| (t.tag().to_string(), m)).collect(),
        command_accuracy: correct as f64 / n as f64,
        parameter_accuracy: (params_total > 0).then(|| params_matched as f64 / params_total as f64),
        shape: None,
    })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

impl MetricsReport {
    /// Plain-text table: the average block, then AUC and F1 per type.
    pub fn table(&self) -> String {
        let mut header = vec!["Avg ACC".to_string(), "Avg F1".into(), "Avg AUC".into()];
        let mut row = vec![format!("{:.3}", self.macro_accuracy), cell(self.macro_f1), cell(self.macro_auc)];
        for t in SCORED_TYPES {
            let m = &self.per_type[t.tag()];
            header.push(format!("{} AUC", t.tag()));
            header.push(format!("{} F1", t.tag()));
            row.push(cell(m.auc));
            row.push(cell(m.f1));
        }
        let widths: Vec<usize> = header.iter().zip(&row).map(|(h, r)| h.len().max(r.len())).collect();
        let mut out = String::new();
        for line in [&header, &row] {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).expect("write to String");
        }
        writeln!(
            out,
            "command accuracy {:.3}, parameter accuracy {}, {} records, {} positions",
            self.command_accuracy,
            cell(self.parameter_accuracy),
            self.records,
            self.positions
        )
        .expect("write to String");
        if let Some(s) = &self.shape {
            writeln!(out, "CD {:.3}  MMD {:.3}  JSD {:.3}", s.cd, s.mmd, s.jsd).expect("write to String");
        }
        out
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

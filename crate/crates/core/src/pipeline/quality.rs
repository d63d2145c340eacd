use serde::{Deserialize, Serialize};

use super::client::{ClientError, GeneratorClient};
use super::diff::issues_text;
use super::PipelineError;
use crate::ccs::{parse_ccs, serialize_ccs, CadSequence, Granularity};
use crate::metrics::{sequence_lcs, ConfidenceTrack, LcsReport};

/// Acceptance threshold on the LCS ratio (inclusive).
pub const ACCEPT_THRESHOLD: f64 = 0.9;
/// Reflection retries after the first round.
pub const MAX_RETRIES: usize = 2;
/// Confidence below which a predicted command is flagged for correction.
pub const CONFIDENCE_THRESHOLD: f64 = 0.98;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityConfig {
    pub threshold: f64,
    pub max_retries: usize,
    pub granularity: Granularity,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig { threshold: ACCEPT_THRESHOLD, max_retries: MAX_RETRIES, granularity: Granularity::Parameter }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub id: Option<String>,
    pub lcs: LcsReport,
    pub accepted: bool,
    pub threshold: f64,
    /// Raw text returned by the generator.
    pub regenerated: String,
    /// Why the regenerated text could not be scored, if it could not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_failure: Option<String>,
}

impl ValidationReport {
    pub fn ratio(&self) -> f64 {
        self.lcs.ratio
    }
}

/// Scores a description by regenerating CCS from it and comparing the token
/// streams with the ground truth. Unparseable or empty replies score 0.
pub fn reverse_validate(
    description: &str,
    gt: &CadSequence,
    client: &dyn GeneratorClient,
    config: &QualityConfig,
) -> Result<ValidationReport, ClientError> {
    let regenerated = client.describe_to_ccs(description)?;
    Ok(score(gt, regenerated, config))
}

fn score(gt: &CadSequence, regenerated: String, config: &QualityConfig) -> ValidationReport {
    let zero = LcsReport { lcs_length: 0, ground_truth_length: gt.len(), ratio: 0.0 };
    let (lcs, parse_failure) = match parse_ccs(&regenerated) {
        Ok(seq) if seq.is_empty() => (zero, Some("empty response".to_string())),
        Ok(seq) => match sequence_lcs(gt, &seq, config.granularity) {
            Ok(lcs) => (lcs, None),
            Err(e) => (zero, Some(e.to_string())),
        },
        Err(e) => (zero, Some(e.to_string())),
    };
    ValidationReport {
        id: None,
        accepted: lcs.ratio >= config.threshold,
        lcs,
        threshold: config.threshold,
        regenerated,
        parse_failure,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionRound {
    pub description: String,
    pub regenerated_ccs: String,
    pub lcs_ratio: f64,
    pub accepted: bool,
    /// Diff handed to the reflection request that followed this round.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub issues: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReflectionOutcome {
    pub rounds: Vec<ReflectionRound>,
    pub final_accepted: bool,
    pub retries_used: usize,
}

impl ReflectionOutcome {
    pub fn ratios(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.lcs_ratio).collect()
    }

    pub fn final_ratio(&self) -> Option<f64> {
        self.rounds.last().map(|r| r.lcs_ratio)
    }
}

/// A client failure part-way through reflection, with the rounds so far.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{source} (after {} completed rounds)", partial.rounds.len())]
pub struct ReflectionError {
    pub source: ClientError,
    pub partial: ReflectionOutcome,
}

/// Validates a description and, while it is rejected, asks the client to
/// revise it from a local diff and validates again, up to
/// `config.max_retries` times. The first round counts as a round, not a
/// retry; the threshold applies to every round.
pub fn reflect_optimize(
    description: &str,
    gt: &CadSequence,
    client: &dyn GeneratorClient,
    config: &QualityConfig,
) -> Result<ReflectionOutcome, ReflectionError> {
    let mut outcome = ReflectionOutcome::default();
    let gt_text = serialize_ccs(gt);
    let mut current = description.to_string();
    loop {
        let report = match reverse_validate(&current, gt, client, config) {
            Ok(r) => r,
            Err(source) => return Err(ReflectionError { source, partial: outcome }),
        };
        outcome.rounds.push(ReflectionRound {
            description: current.clone(),
            regenerated_ccs: report.regenerated.clone(),
            lcs_ratio: report.lcs.ratio,
            accepted: report.accepted,
            issues: None,
            parse_failure: report.parse_failure.clone(),
        });
        outcome.final_accepted = report.accepted;
        if report.accepted || outcome.retries_used >= config.max_retries {
            return Ok(outcome);
        }

        let issues = match (&report.parse_failure, parse_ccs(&report.regenerated)) {
            (None, Ok(seq)) => issues_text(gt, &seq),
            (Some(why), _) => format!("The regenerated text could not be used: {why}"),
            (None, Err(e)) => format!("The regenerated text could not be used: {e}"),
        };
        outcome.rounds.last_mut().expect("round just pushed").issues = Some(issues.clone());
        current = match client.reflect(&current, &gt_text, &issues) {
            Ok(d) => d,
            Err(source) => return Err(ReflectionError { source, partial: outcome }),
        };
        outcome.retries_used += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionRequest {
    pub description: String,
    pub predicted: CadSequence,
    pub confidence: ConfidenceTrack,
    pub flagged_positions: Vec<usize>,
    pub threshold: f64,
}

/// Flags every command whose type or parameter confidence is below
/// `threshold` and packages the prediction for a correction request.
pub fn flag_low_confidence(
    description: &str,
    predicted: &CadSequence,
    confidence: &ConfidenceTrack,
    threshold: f64,
) -> Result<CorrectionRequest, PipelineError> {
    if confidence.len() != predicted.len() {
        return Err(PipelineError::Alignment { commands: predicted.len(), scores: confidence.len() });
    }
    let flagged_positions =
        (0..predicted.len()).filter(|&i| confidence.s_cmd(i) < threshold || confidence.s_args(i) < threshold).collect();
    Ok(CorrectionRequest {
        description: description.to_string(),
        predicted: predicted.clone(),
        confidence: confidence.clone(),
        flagged_positions,
        threshold,
    })
}

/// Sends a correction request and parses the corrected sequence.
pub fn request_correction(
    request: &CorrectionRequest,
    client: &dyn GeneratorClient,
) -> Result<CadSequence, PipelineError> {
    let text = client.correct(&request.description, &serialize_ccs(&request.predicted), &request.confidence)?;
    parse_ccs(&text).map_err(|e| PipelineError::Parse(e.to_string()))
}

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::ccs::{token_stream_with, CadSequence, Granularity};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LcsReport {
    pub lcs_length: usize,
    pub ground_truth_length: usize,
    pub ratio: f64,
}

/// Length of the longest common subsequence, two-row dynamic program.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            row[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(row[j]) };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

/// LCS length normalized by the ground-truth length.
pub fn lcs_ratio<T: PartialEq>(ground_truth: &[T], generated: &[T]) -> Result<LcsReport, MetricsError> {
    if ground_truth.is_empty() {
        return Err(MetricsError::EmptyGroundTruth);
    }
    let lcs = lcs_length(ground_truth, generated);
    Ok(LcsReport {
        lcs_length: lcs,
        ground_truth_length: ground_truth.len(),
        ratio: lcs as f64 / ground_truth.len() as f64,
    })
}

/// [`lcs_ratio`] over the token streams of two sequences.
pub fn sequence_lcs(
    ground_truth: &CadSequence,
    generated: &CadSequence,
    granularity: Granularity,
) -> Result<LcsReport, MetricsError> {
    lcs_ratio(&token_stream_with(ground_truth, granularity), &token_stream_with(generated, granularity))
}

//! Sequence and shape evaluation metrics.

mod classify;
mod lcs;
mod shape;

pub use classify::{
    command_metrics, read_records, ConfidenceTrack, MetricsReport, PredictionRecord, ShapeMetrics, TypeMetrics,
    SCORED_TYPES,
};
pub use lcs::{lcs_length, lcs_ratio, sequence_lcs, LcsReport};
pub use shape::{chamfer_distance, jsd, mmd, occupancy_histogram, KdTree, CD_SCALE, JSD_GRID, JSD_SCALE};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("ground-truth token list is empty")]
    EmptyGroundTruth,
    #[error("no records to evaluate")]
    EmptyInput,
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("point-cloud set is empty")]
    EmptySet,
    #[error("confidence track has {found} entries for {expected} commands")]
    Alignment { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("record line {line}: {message}")]
    Record { line: usize, message: String },
}

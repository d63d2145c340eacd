//! Quality-control loops over pluggable text generators.

mod batch;
mod client;
mod diff;
mod http;
mod quality;
mod replay;

pub use batch::{
    histogram_bin, histogram_table, read_checkpoint, read_manifest, run_batch, summarize, BatchConfig, BatchReport,
    BatchSummary, ManifestEntry, SampleReport, HISTOGRAM_BINS,
};
pub use client::{ClientError, GeneratorClient, MockClient, Request, Task};
pub use diff::{issues_text, sequence_diff, DiffEntry};
pub use http::{HttpClient, HttpConfig, TOKEN_ENV};
pub use quality::{
    flag_low_confidence, reflect_optimize, request_correction, reverse_validate, CorrectionRequest, QualityConfig,
    ReflectionError, ReflectionOutcome, ReflectionRound, ValidationReport, ACCEPT_THRESHOLD, CONFIDENCE_THRESHOLD,
    MAX_RETRIES,
};
pub use replay::{RecordingClient, ReplayClient, TranscriptEntry};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error("confidence track has {scores} entries for {commands} commands")]
    Alignment { commands: usize, scores: usize },
    #[error("unparseable generator output: {0}")]
    Parse(String),
    #[error("unreadable manifest {0}")]
    Manifest(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

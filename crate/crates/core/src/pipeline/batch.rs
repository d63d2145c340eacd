use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::client::GeneratorClient;
use super::quality::{reflect_optimize, reverse_validate, QualityConfig, ReflectionOutcome, ValidationReport};
use super::PipelineError;
use crate::ccs::{parse_ccs, validate, CadSequence};

/// Number of equal-width LCS-ratio bins on `[0, 1]`.
pub const HISTOGRAM_BINS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub description: String,
    /// Relative paths resolve against the manifest's directory.
    pub gt_ccs_path: PathBuf,
}

/// Reads a JSON-lines manifest. Duplicate ids are rejected.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, PipelineError> {
    let unreadable = |e: String| PipelineError::Manifest(format!("{}: {e}", path.display()));
    let file = File::open(path).map_err(|e| unreadable(e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| unreadable(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut entry: ManifestEntry =
            serde_json::from_str(&line).map_err(|e| unreadable(format!("line {}: {e}", n + 1)))?;
        if !seen.insert(entry.id.clone()) {
            return Err(unreadable(format!("line {}: duplicate id {}", n + 1, entry.id)));
        }
        if entry.gt_ccs_path.is_relative() {
            entry.gt_ccs_path = base.join(&entry.gt_ccs_path);
        }
        out.push(entry);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub quality: QualityConfig,
    /// Run the reflection loop on rejected samples.
    pub reflect: bool,
    pub workers: usize,
    /// JSON-lines file of finished samples; existing entries are skipped.
    pub checkpoint: Option<PathBuf>,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig { quality: QualityConfig::default(), reflect: true, workers: 4, checkpoint: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub id: String,
    /// Final LCS ratio; absent when the sample failed.
    pub ratio: Option<f64>,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflection: Option<ReflectionOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SampleReport {
    fn failed(id: &str, error: String) -> Self {
        SampleReport {
            id: id.to_string(),
            ratio: None,
            accepted: false,
            validation: None,
            reflection: None,
            error: Some(error),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub samples: usize,
    pub scored: usize,
    pub errors: usize,
    pub accepted: usize,
    /// Accepted samples over all samples; failed samples count as rejected.
    pub acceptance_rate: f64,
    pub mean_ratio: Option<f64>,
    /// Counts of final ratios; bin `k` covers `[k/50, (k+1)/50)`, the last
    /// bin also takes 1.0.
    pub histogram: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub samples: Vec<SampleReport>,
    pub summary: BatchSummary,
}

pub fn histogram_bin(ratio: f64) -> usize {
    ((ratio * HISTOGRAM_BINS as f64).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

/// Aggregates sample reports; input order does not matter.
pub fn summarize(samples: &[SampleReport]) -> BatchSummary {
    let mut histogram = vec![0; HISTOGRAM_BINS];
    let mut ratios: Vec<(&str, f64)> = samples.iter().filter_map(|s| s.ratio.map(|r| (s.id.as_str(), r))).collect();
    ratios.sort_by(|a, b| a.0.cmp(b.0));
    for (_, r) in &ratios {
        histogram[histogram_bin(*r)] += 1;
    }
    let accepted = samples.iter().filter(|s| s.accepted).count();
    BatchSummary {
        samples: samples.len(),
        scored: ratios.len(),
        errors: samples.iter().filter(|s| s.error.is_some()).count(),
        accepted,
        acceptance_rate: if samples.is_empty() { 0.0 } else { accepted as f64 / samples.len() as f64 },
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().map(|r| r.1).sum::<f64>() / ratios.len() as f64),
        histogram,
    }
}

impl BatchReport {
    /// Builds a report with samples ordered by id.
    pub fn new(mut samples: Vec<SampleReport>) -> Self {
        samples.sort_by(|a, b| a.id.cmp(&b.id));
        let summary = summarize(&samples);
        BatchReport { samples, summary }
    }

    /// Histogram as text, one row per non-empty bin.
    pub fn histogram_table(&self) -> String {
        histogram_table(&self.summary)
    }
}

pub fn histogram_table(summary: &BatchSummary) -> String {
    let mut out = String::new();
    let peak = summary.histogram.iter().copied().max().unwrap_or(0).max(1);
    writeln!(out, "{:<13}  {:>6}", "LCS ratio", "count").expect("write to String");
    for (k, &count) in summary.histogram.iter().enumerate().filter(|(_, &c)| c > 0) {
        let lo = k as f64 / HISTOGRAM_BINS as f64;
        let hi = (k + 1) as f64 / HISTOGRAM_BINS as f64;
        let close = if k + 1 == HISTOGRAM_BINS { ']' } else { ')' };
        let bar = "#".repeat((count * 40).div_ceil(peak));
        writeln!(out, "[{lo:.2}, {hi:.2}{close}  {count:>6}  {bar}").expect("write to String");
    }
    write!(
        out,
        "samples {}, scored {}, errors {}, accepted {} ({:.1}%), mean ratio {}",
        summary.samples,
        summary.scored,
        summary.errors,
        summary.accepted,
        100.0 * summary.acceptance_rate,
        summary.mean_ratio.map_or_else(|| "-".to_string(), |m| format!("{m:.3}"))
    )
    .expect("write to String");
    out
}

fn load_gt(path: &Path) -> Result<CadSequence, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let seq = parse_ccs(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = validate(&seq);
    if let Some(issue) = report.issues.first() {
        return Err(format!("{}: invalid ground truth: {} at command {}", path.display(), issue.code, issue.position));
    }
    Ok(seq)
}

fn run_sample(entry: &ManifestEntry, client: &dyn GeneratorClient, config: &BatchConfig) -> SampleReport {
    let gt = match load_gt(&entry.gt_ccs_path) {
        Ok(gt) => gt,
        Err(e) => return SampleReport::failed(&entry.id, e),
    };
    if config.reflect {
        match reflect_optimize(&entry.description, &gt, client, &config.quality) {
            Ok(outcome) => SampleReport {
                id: entry.id.clone(),
                ratio: outcome.final_ratio(),
                accepted: outcome.final_accepted,
                validation: None,
                reflection: Some(outcome),
                error: None,
            },
            Err(e) => {
                SampleReport { reflection: Some(e.partial.clone()), ..SampleReport::failed(&entry.id, e.to_string()) }
            }
        }
    } else {
        match reverse_validate(&entry.description, &gt, client, &config.quality) {
            Ok(mut report) => {
                report.id = Some(entry.id.clone());
                SampleReport {
                    id: entry.id.clone(),
                    ratio: Some(report.lcs.ratio),
                    accepted: report.accepted,
                    validation: Some(report),
                    reflection: None,
                    error: None,
                }
            }
            Err(e) => SampleReport::failed(&entry.id, e.to_string()),
        }
    }
}

/// Reads finished samples from a checkpoint file. Failed samples are
/// dropped so they run again; a torn final line is ignored.
pub fn read_checkpoint(path: &Path) -> Result<BTreeMap<String, SampleReport>, PipelineError> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(PipelineError::Io(e)),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if let Ok(sample) = serde_json::from_str::<SampleReport>(&line) {
            if sample.error.is_none() {
                done.insert(sample.id.clone(), sample);
            }
        }
    }
    Ok(done)
}

/// Runs every manifest sample through the quality loop on `config.workers`
/// threads. Per-sample failures are recorded and the batch continues.
pub fn run_batch(
    manifest: &Path,
    client: &dyn GeneratorClient,
    config: &BatchConfig,
) -> Result<BatchReport, PipelineError> {
    let entries = read_manifest(manifest)?;
    let done = match &config.checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => BTreeMap::new(),
    };
    let wanted: HashSet<&str> = entries.iter().map(|e| e.id.as_str()).collect();
    let todo: Vec<&ManifestEntry> = entries.iter().filter(|e| !done.contains_key(&e.id)).collect();

    let sink = match &config.checkpoint {
        Some(path) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?)),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let fresh: Vec<SampleReport> = pool.install(|| {
        todo.par_iter()
            .map(|entry| {
                let report = run_sample(entry, client, config);
                if let Some(sink) = &sink {
                    let line = serde_json::to_string(&report).expect("sample report serializes");
                    let mut file = sink.lock().expect("checkpoint lock");
                    // a failed checkpoint write only costs a rerun of this sample
                    let _ = writeln!(file, "{line}").and_then(|_| file.flush());
                }
                report
            })
            .collect()
    });

    let samples = done.into_values().filter(|s| wanted.contains(s.id.as_str())).chain(fresh).collect();
    Ok(BatchReport::new(samples))
}

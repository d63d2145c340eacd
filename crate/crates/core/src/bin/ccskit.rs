use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ccskit::ccs::{from_json, parse_ccs, serialize_ccs, to_json, validate, CadSequence};
use ccskit::geom::{
    evaluate_sequence, export_stl, extract_mesh, read_stl, sample_point_cloud, Grid, PointCloud, TriangleMesh,
};
use ccskit::metrics::{chamfer_distance, command_metrics, jsd, mmd, read_records, ShapeMetrics, JSD_GRID};
use ccskit::pipeline::{
    histogram_table, read_manifest, run_batch, summarize, BatchConfig, BatchReport, GeneratorClient, HttpClient,
    HttpConfig, MockClient, QualityConfig, RecordingClient, ReplayClient, SampleReport,
};

#[derive(Parser)]
#[command(name = "ccskit", version, about = "Parse, evaluate and score CAD command sequences")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a sequence (text or JSON) and print it in canonical form.
    Parse {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check structural validity; exits non-zero when issues are found.
    Validate {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a sequence to a voxel solid and write its surface as binary STL.
    Mesh {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Sample surface points from an STL file or a sequence.
    Sample {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 8000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = CloudFormat::Xyz)]
        format: CloudFormat,
    },
    /// Score prediction records (JSON lines) and optional point-cloud sets.
    Eval {
        records: PathBuf,
        /// Reference clouds (.xyz), paired by position with --generated.
        #[arg(long, num_args = 1..)]
        reference: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        generated: Vec<PathBuf>,
        #[arg(long, default_value_t = JSD_GRID)]
        jsd_grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run reverse validation and reflection over a manifest.
    Reflect {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = ClientKind::Replay)]
        client: ClientKind,
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Save every exchange as a replayable transcript.
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
        #[arg(long, default_value_t = 2)]
        max_retries: usize,
        /// Validate only; skip the reflection loop.
        #[arg(long)]
        no_reflect: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        timeout_secs: u64,
        #[arg(long, default_value_t = 3)]
        http_retries: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the LCS-ratio histogram of one or more batch reports.
    Stats {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CloudFormat {
    Xyz,
    Bin,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ClientKind {
    Http,
    Replay,
    Mock,
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

fn load_sequence(path: &Path) -> Result<CadSequence> {
    let text = read_input(path)?;
    if text.trim_start().starts_with('{') {
        Ok(from_json(&text)?)
    } else {
        Ok(parse_ccs(&text)?)
    }
}

fn mesh_of(path: &Path, resolution: usize) -> Result<TriangleMesh> {
    let seq = load_sequence(path)?;
    let solid = evaluate_sequence(&seq, Grid::cube(resolution))?;
    Ok(extract_mesh(&solid)?)
}

fn load_cloud(path: &Path) -> Result<PointCloud> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(PointCloud::read_xyz(BufReader::new(file))?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Cmd::Parse { input, json } => {
            let seq = load_sequence(&input)?;
            println!("{}", if json { to_json(&seq) } else { serialize_ccs(&seq) });
        }
        Cmd::Validate { input, json } => {
            let seq = load_sequence(&input)?;
            let report = validate(&seq);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else if report.ok {
                println!("ok: {} commands", seq.len());
            } else {
                for issue in &report.issues {
                    println!("command {}: {}: {}", issue.position, issue.code, issue.message);
                }
            }
            if !report.ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Mesh { input, output, resolution } => {
            let mesh = mesh_of(&input, resolution)?;
            let bytes = export_stl(&mesh, BufWriter::new(File::create(&output)?))?;
            println!(
                "{}: {} triangles, {bytes} bytes, watertight {}, volume {:.6}",
                output.display(),
                mesh.triangles.len(),
                mesh.is_watertight(),
                mesh.volume()
            );
        }
        Cmd::Sample { input, output, n, seed, resolution, format } => {
            let is_stl = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("stl"));
            let mesh =
                if is_stl { read_stl(BufReader::new(File::open(&input)?))? } else { mesh_of(&input, resolution)? };
            let cloud = sample_point_cloud(&mesh, n, seed)?;
            let sink = BufWriter::new(File::create(&output)?);
            match format {
                CloudFormat::Xyz => cloud.write_xyz(sink)?,
                CloudFormat::Bin => cloud.write_binary(sink)?,
            }
            println!("{}: {} points (seed {seed})", output.display(), cloud.len());
        }
        Cmd::Eval { records, reference, generated, jsd_grid, json } => {
            let file = File::open(&records).with_context(|| format!("opening {}", records.display()))?;
            let mut report = command_metrics(&read_records(BufReader::new(file))?)?;
            if !reference.is_empty() || !generated.is_empty() {
                if reference.len() != generated.len() {
                    bail!("--reference and --generated need the same number of clouds");
                }
                let refs = reference.iter().map(|p| load_cloud(p)).collect::<Result<Vec<_>>>()?;
                let gens = generated.iter().map(|p| load_cloud(p)).collect::<Result<Vec<_>>>()?;
                let mut cd = 0.0;
                for (r, g) in refs.iter().zip(&gens) {
                    cd += chamfer_distance(r, g)?;
                }
                report.shape = Some(ShapeMetrics {
                    cd: cd / refs.len() as f64,
                    mmd: mmd(&refs, &gens)?,
                    jsd: jsd(&refs, &gens, jsd_grid)?,
                });
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
        }
        Cmd::Reflect {
            manifest,
            client,
            endpoint,
            transcript,
            record,
            workers,
            threshold,
            max_retries,
            no_reflect,
            checkpoint,
            timeout_secs,
            http_retries,
            output,
        } => {
            let generator: Box<dyn GeneratorClient> = match client {
                ClientKind::Http => {
                    let endpoint = endpoint.context("--client http needs --endpoint")?;
                    let mut config = HttpConfig::new(endpoint).with_env_token();
                    config.timeout = Duration::from_secs(timeout_secs);
                    config.retries = http_retries;
                    Box::new(HttpClient::new(config)?)
                }
                ClientKind::Replay => {
                    let path = transcript.context("--client replay needs --transcript")?;
                    Box::new(ReplayClient::open(&path).with_context(|| format!("reading {}", path.display()))?)
                }
                ClientKind::Mock => {
                    // answers each description with its own ground truth
                    let mut table = HashMap::new();
                    for entry in read_manifest(&manifest)? {
                        if let Ok(text) = fs::read_to_string(&entry.gt_ccs_path) {
                            table.insert(entry.description, text);
                        }
                    }
                    Box::new(MockClient::lookup(table))
                }
            };
            let config = BatchConfig {
                quality: QualityConfig { threshold, max_retries, ..Default::default() },
                reflect: !no_reflect,
                workers,
                checkpoint,
            };
            let recorder = record.as_ref().map(|_| RecordingClient::new(generator.as_ref()));
            let report = match &recorder {
                Some(r) => run_batch(&manifest, r, &config)?,
                None => run_batch(&manifest, generator.as_ref(), &config)?,
            };
            if let (Some(path), Some(r)) = (&record, &recorder) {
                r.write_transcript(BufWriter::new(File::create(path)?))?;
            }
            let text = serde_json::to_string_pretty(&report)?;
            match output {
                Some(path) => {
                    fs::write(&path, text + "\n")?;
                    println!("{}", report.histogram_table());
                }
                None => println!("{text}"),
            }
        }
        Cmd::Stats { reports, json } => {
            let mut samples: Vec<SampleReport> = Vec::new();
            for path in &reports {
                let report: BatchReport =
                    serde_json::from_str(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
                samples.extend(report.samples);
            }
            let summary = summarize(&samples);
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                println!("{}", histogram_table(&summary));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e:#}");
            ExitCode::from(2)
        }
    }
}

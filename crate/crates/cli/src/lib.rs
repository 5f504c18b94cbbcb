//! Command-line front end.
//!
//! Exit codes are the only success signal: 0 success, 1 unreadable or
//! invalid input, 2 unseparable instance, 3 timeout (the incumbent is still
//! written), 4 invalid separator, 5 any other failure.

pub mod io;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use intsep::ingest::{self, GtfsParams, RandomParams, SynthesisParams};
use intsep::reduction::{self, SetCoverInstance};
use intsep::solver::{Backend, SolveReport, SolverConfig, SolverError};
use intsep::{count_paths_exact, count_walks, find_violating_path, Instance, PathCount, PathError};
use serde::Serialize;

use report::RunRecord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSEPARABLE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_INVALID_SEPARATOR: i32 = 4;
pub const EXIT_OTHER: i32 = 5;

/// An error paired with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_INPUT,
            error: error.into(),
        }
    }

    fn other(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_OTHER,
            error: error.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "intsep", version, about = "Minimum interval separators in temporal graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a separator timeline and append a report row.
    Solve(SolveArgs),
    /// Check a timeline against an instance; prints a surviving path on failure.
    Verify(VerifyArgs),
    /// Synthesize an instance from a TNTP network, or a small random one.
    Generate(GenerateArgs),
    /// Build an instance from a GTFS feed directory.
    IngestGtfs(GtfsArgs),
    /// Encode a set cover instance.
    Reduce(ReduceArgs),
    /// Count deadline-feasible paths, falling back to walks over budget.
    Count(CountArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Greedy,
}

impl Mode {
    fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Greedy => "greedy",
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file. Omit when --manifest is given.
    #[arg(required_unless_present = "manifest", conflicts_with = "manifest")]
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: Mode,
    /// Wall-clock limit in seconds for exact mode.
    #[arg(long, default_value_t = 3600.0, value_parser = parse_seconds)]
    pub timeout: f64,
    /// Search-tree node budget for the exact path count in the report.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Timeline output for a single instance; standard output if omitted.
    #[arg(long, conflicts_with = "manifest")]
    pub timeline_out: Option<PathBuf>,
    /// Directory receiving `<stem>.timeline.json` per manifest entry.
    #[arg(long, requires = "manifest")]
    pub timeline_dir: Option<PathBuf>,
    /// Report file to append to; rows go to standard output if omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// File listing one instance path per line, relative to the manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Worker threads for manifest runs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed recorded in the report row.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dataset name for the report; defaults to the file stem.
    #[arg(long, conflicts_with = "manifest")]
    pub dataset: Option<String>,
    /// Paths enumerated up front in greedy mode.
    #[arg(long, default_value_t = 10_000)]
    pub path_limit: usize,
    /// Violating paths added per round in exact mode.
    #[arg(long, default_value_t = 1)]
    pub batch_size: usize,
    #[arg(long, default_value = "bnb")]
    pub backend: Backend,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub timeline: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// TNTP network; a random small instance is drawn when omitted.
    #[arg(long)]
    pub tntp: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub horizon: u32,
    /// Deadline as a multiple of the first peeled path's arc count.
    #[arg(long, default_value_t = 3)]
    pub deadline_multiplier: u32,
    /// Vertex bound for random instances.
    #[arg(long, default_value_t = 7)]
    pub max_vertices: usize,
    /// Horizon bound for random instances.
    #[arg(long, default_value_t = 8)]
    pub max_horizon: u32,
    /// Temporal arc bound for random instances.
    #[arg(long, default_value_t = 25)]
    pub max_temporal_arcs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GtfsArgs {
    pub dir: PathBuf,
    #[arg(long, default_value_t = 7200)]
    pub window_seconds: u32,
    #[arg(long, default_value_t = 60)]
    pub bin_seconds: u32,
    /// Window start as HH:MM:SS; defaults to the first departure's hour.
    #[arg(long)]
    pub window_start: Option<String>,
    /// Shrink the horizon to the last occupied bin.
    #[arg(long)]
    pub trim: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub setcover: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Element-to-window map as JSON.
    #[arg(long)]
    pub windows_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

fn parse_seconds(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if (0.0..1e12).contains(&x) => Ok(x),
        _ => Err(format!("`{text}` is not a non-negative number of seconds")),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Verify(args) => verify(&args),
        Command::Generate(args) => generate(&args),
        Command::IngestGtfs(args) => ingest_gtfs(&args),
        Command::Reduce(args) => reduce(&args),
        Command::Count(args) => count(&args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::input)
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    io::parse_instance(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::input)
}

/// Writes to `path`, or to standard output when absent.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::other),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn path_count(instance: &Instance, budget: u64) -> PathCount {
    match count_paths_exact(instance, budget) {
        Ok(c) => c,
        Err(PathError::BudgetExceeded { .. }) | Err(PathError::LimitExceeded { .. }) => count_walks(instance),
    }
}

struct SolveJob {
    instance_path: PathBuf,
    timeline_out: Option<PathBuf>,
    dataset: String,
}

struct SolveResult {
    record: Option<RunRecord>,
    failure: Option<Failure>,
}

fn solve(args: &SolveArgs) -> Outcome {
    let jobs = match &args.manifest {
        Some(manifest) => manifest_jobs(manifest, args.timeline_dir.as_deref())?,
        None => {
            let path = args
                .instance
                .clone()
                .expect("clap requires an instance without a manifest");
            let dataset = args.dataset.clone().unwrap_or_else(|| stem(&path));
            vec![SolveJob {
                instance_path: path,
                timeline_out: args.timeline_out.clone(),
                dataset,
            }]
        }
    };
    let results = run_jobs(args, &jobs)?;
    let records: Vec<RunRecord> = results.iter().filter_map(|r| r.record.clone()).collect();
    match &args.report {
        Some(path) => report::append(path, &records).map_err(Failure::other)?,
        None if args.manifest.is_some() || args.timeline_out.is_some() => {
            let mut text = format!("{}\n{}\n", report::SCHEMA_LINE, report::HEADER);
            for r in &records {
                text.push_str(&r.to_row());
                text.push('\n');
            }
            print!("{text}");
        }
        // a lone solve without files prints the timeline on standard output;
        // the row goes to the diagnostic stream so the two do not mix
        None => {
            for r in &records {
                eprintln!("{}", r.to_row());
            }
        }
    }
    // the most severe failure decides the exit code; all are reported
    let mut worst: Option<i32> = None;
    let mut failed = 0;
    for (job, result) in jobs.iter().zip(results) {
        if let Some(f) = result.failure {
            eprintln!("{}: {:#}", job.instance_path.display(), f.error);
            failed += 1;
            worst = worst.max(Some(f.code));
        }
    }
    match worst {
        Some(code) => Err(Failure {
            code,
            error: anyhow!("{failed} of {} instances did not finish cleanly", jobs.len()),
        }),
        None => Ok(()),
    }
}

fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.split('.').next().unwrap_or_default().to_string()
}

fn manifest_jobs(manifest: &Path, timeline_dir: Option<&Path>) -> Result<Vec<SolveJob>, Failure> {
    let text = read(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut jobs = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let instance_path = base.join(line);
        let dataset = stem(&instance_path);
        let timeline_out = timeline_dir.map(|d| d.join(format!("{dataset}.timeline.json")));
        jobs.push(SolveJob {
            instance_path,
            timeline_out,
            dataset,
        });
    }
    if jobs.is_empty() {
        return Err(Failure::input(anyhow!(
            "manifest {} lists no instances",
            manifest.display()
        )));
    }
    Ok(jobs)
}

#[cfg(feature = "parallel")]
fn run_jobs(args: &SolveArgs, jobs: &[SolveJob]) -> Result<Vec<SolveResult>, Failure> {
    use rayon::prelude::*;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(Failure::other)?;
    Ok(pool.install(|| jobs.par_iter().map(|job| solve_one(args, job)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(args: &SolveArgs, jobs: &[SolveJob]) -> Result<Vec<SolveResult>, Failure> {
    Ok(jobs.iter().map(|job| solve_one(args, job)).collect())
}

fn solve_one(args: &SolveArgs, job: &SolveJob) -> SolveResult {
    let instance = match load_instance(&job.instance_path) {
        Ok(i) => i,
        Err(f) => {
            return SolveResult {
                record: None,
                failure: Some(f),
            }
        }
    };
    let config = SolverConfig {
        timeout: Some(Duration::from_secs_f64(args.timeout)),
        path_limit: args.path_limit,
        backend: args.backend,
        batch_size: args.batch_size.max(1),
        ..SolverConfig::default()
    };
    let started = Instant::now();
    let solved = match args.mode {
        Mode::Exact => intsep::solve_exact(&instance, &config),
        Mode::Greedy => intsep::solve_greedy(&instance, config.path_limit),
    };
    let (report, mut failure, mode) = match solved {
        Ok(r) => (r, None, args.mode.label().to_string()),
        Err(SolverError::TimeoutExceeded(r)) => (
            *r,
            Some(Failure {
                code: EXIT_TIMEOUT,
                error: anyhow!("timed out after {}s; the incumbent was written", args.timeout),
            }),
            format!("{}-incumbent", args.mode.label()),
        ),
        Err(SolverError::Unseparable) => {
            return SolveResult {
                record: None,
                failure: Some(Failure {
                    code: EXIT_UNSEPARABLE,
                    error: SolverError::Unseparable.into(),
                }),
            }
        }
        Err(e) => {
            return SolveResult {
                record: None,
                failure: Some(Failure::other(e)),
            }
        }
    };
    let elapsed = started.elapsed();
    if let Err(f) = emit(
        job.timeline_out.as_deref(),
        &io::write_timeline(&instance, &report.timeline),
    ) {
        failure = Some(f);
    }
    SolveResult {
        record: Some(record(&instance, &report, job, args, &mode, elapsed)),
        failure,
    }
}

fn record(
    instance: &Instance,
    report: &SolveReport,
    job: &SolveJob,
    args: &SolveArgs,
    mode: &str,
    elapsed: Duration,
) -> RunRecord {
    let g = instance.graph();
    let count = path_count(instance, args.budget);
    RunRecord {
        dataset: job.dataset.clone(),
        vertices: g.vertex_count(),
        temporal_arcs: g.temporal_arc_count(),
        horizon: g.horizon(),
        deadline: instance.deadline(),
        length: report.length,
        separator_vertices: report.separator_vertices,
        path_count: count.value.to_string(),
        path_count_exact: count.exact,
        time_seconds: elapsed.as_secs_f64(),
        mode: mode.to_string(),
        seed: args.seed,
    }
}

fn verify(args: &VerifyArgs) -> Outcome {
    let instance = load_instance(&args.instance)?;
    let text = read(&args.timeline)?;
    let timeline = io::parse_timeline(&instance, &text)
        .with_context(|| args.timeline.display().to_string())
        .map_err(Failure::input)?;
    match find_violating_path(&instance, &timeline) {
        None => Ok(()),
        Some(path) => {
            println!("{}", path.display(instance.graph()));
            Err(Failure {
                code: EXIT_INVALID_SEPARATOR,
                error: anyhow!(
                    "the timeline leaves a path of traveling time {} open",
                    path.traveling_time()
                ),
            })
        }
    }
}

fn generate(args: &GenerateArgs) -> Outcome {
    let instance = match &args.tntp {
        Some(path) => {
            let network = ingest::load_tntp(&read(path)?)
                .with_context(|| path.display().to_string())
                .map_err(Failure::input)?;
            let params = SynthesisParams {
                horizon: args.horizon,
                deadline_multiplier: args.deadline_multiplier,
                ..SynthesisParams::new(args.seed)
            };
            ingest::synthesize(&network, &params).map_err(Failure::other)?.instance
        }
        None => ingest::random_instance(
            args.seed,
            RandomParams {
                max_vertices: args.max_vertices,
                max_horizon: args.max_horizon,
                max_temporal_arcs: args.max_temporal_arcs,
            },
        ),
    };
    emit(args.out.as_deref(), &io::write_instance(&instance))
}

fn ingest_gtfs(args: &GtfsArgs) -> Outcome {
    let window_start = args
        .window_start
        .as_deref()
        .map(ingest::parse_gtfs_time)
        .transpose()
        .map_err(Failure::input)?;
    let params = GtfsParams {
        window_seconds: args.window_seconds,
        bin_seconds: args.bin_seconds,
        window_start,
        trim_horizon: args.trim,
        ..GtfsParams::default()
    };
    let graph = ingest::load_gtfs(&args.dir, &params).map_err(|e| match e {
        ingest::IngestError::Io(_) | ingest::IngestError::Csv(_) | ingest::IngestError::Parse { .. } => {
            Failure::input(e)
        }
        ingest::IngestError::MissingFile(_)
        | ingest::IngestError::MalformedTime(_)
        | ingest::IngestError::UnknownStop(_) => Failure::input(e),
        other => Failure::other(other),
    })?;
    let (s, z, d) = ingest::select_endpoints_gtfs(&graph, &params).map_err(Failure::other)?;
    let instance = Instance::new(graph, s, z, d).map_err(Failure::other)?;
    emit(args.out.as_deref(), &io::write_instance(&instance))
}

#[derive(Serialize)]
struct WindowMap {
    big_m: u64,
    deadline: u32,
    set_vertices: Vec<String>,
    windows: Vec<WindowEntry>,
}

#[derive(Serialize)]
struct WindowEntry {
    element: usize,
    start: u32,
    end: u32,
    sets: Vec<usize>,
}

fn reduce(args: &ReduceArgs) -> Outcome {
    let sc = SetCoverInstance::parse(&read(&args.setcover)?)
        .with_context(|| args.setcover.display().to_string())
        .map_err(Failure::input)?;
    let ri = reduction::from_set_cover(&sc).map_err(Failure::other)?;
    emit(args.out.as_deref(), &io::write_instance(&ri.instance))?;
    if let Some(path) = &args.windows_out {
        let g = ri.instance.graph();
        let map = WindowMap {
            big_m: ri.big_m,
            deadline: ri.instance.deadline(),
            set_vertices: (1..=sc.set_count())
                .map(|j| g.name(ri.set_vertex(j)).to_string())
                .collect(),
            windows: ri
                .windows
                .iter()
                .map(|w| WindowEntry {
                    element: w.element,
                    start: w.start,
                    end: w.end,
                    sets: w.sets.clone(),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&map).map_err(Failure::other)?;
        text.push('\n');
        emit(Some(path), &text)?;
    }
    Ok(())
}

fn count(args: &CountArgs) -> Outcome {
    if args.budget == 0 {
        return Err(Failure::input(anyhow!("--budget must be at least 1")));
    }
    let instance = load_instance(&args.instance)?;
    println!("{}", path_count(&instance, args.budget));
    Ok(())
}

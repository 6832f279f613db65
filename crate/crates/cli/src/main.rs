use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toppr::baselines::{self, BaselineReport, DensityVariant, DEFAULT_BASELINE_K};
use toppr::io::{self, Report};
use toppr::rank;
use toppr::synth::{self, ScenarioKind, ScenarioSpec};
use toppr::{top_pr, BalloonK, Error, FeatureMatrix, Kernel, PipelineConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser)]
#[command(name = "toppr", version, about = "Topological precision and recall for generated samples")]
struct Cli {
    /// Worker threads (defaults to TOPPR_THREADS, then to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score generated features against real ones.
    Score(ScoreArgs),
    /// Improved precision/recall or density/coverage.
    Baseline(BaselineArgs),
    /// Sweep a synthetic scenario and print one CSV row per step.
    Synth(SynthArgs),
    /// Rank models by several metrics and report how much the rankings disagree.
    Rank(RankArgs),
}

#[derive(Args)]
struct Inputs {
    /// Real features (.npy, or .csv).
    #[arg(long)]
    real: PathBuf,
    /// Generated features (.npy, or .csv).
    #[arg(long)]
    fake: PathBuf,
    /// CSV inputs start with a header row.
    #[arg(long)]
    csv_header: bool,
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// Random projection dimension, or "none" to score raw features.
    #[arg(long, default_value = "32", value_parser = parse_proj_dim)]
    proj_dim: ProjDim,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Bootstrap rounds per confidence band.
    #[arg(long, default_value_t = toppr::band::DEFAULT_REPEATS)]
    bootstrap: usize,
    /// Neighbor rank for the bandwidth: "auto" or a positive integer.
    #[arg(long, default_value = "auto", value_parser = parse_balloon_k)]
    balloon_k: BalloonK,
    #[arg(long, default_value_t = Kernel::default(), value_parser = parse_kernel)]
    kernel: Kernel,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy)]
struct ProjDim(Option<usize>);

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            proj_dim: self.proj_dim.0,
            alpha: self.alpha,
            repeats: self.bootstrap,
            balloon_k: self.balloon_k,
            kernel: self.kernel,
            master_seed: self.seed,
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Pr,
    Dc,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum)]
    metric: Metric,
    #[arg(long, default_value_t = DEFAULT_BASELINE_K)]
    k: usize,
    #[arg(long, default_value = "original", value_parser = parse_variant)]
    dc_variant: DensityVariant,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_parser = parse_scenario)]
    scenario: ScenarioKind,
    /// Sweep steps (default: 13 for shift, 4 for noise, 11 otherwise).
    #[arg(long)]
    steps: Option<usize>,
    /// Real and generated sample counts.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 64)]
    d: usize,
    /// Largest noise fraction in scatter and swap sweeps.
    #[arg(long, default_value_t = 0.15)]
    rho_max: f64,
    /// Shift between the real and generated sets in the noise scenarios.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Leave out the outlier rows of the shift scenario.
    #[arg(long)]
    no_outliers: bool,
    #[arg(long, default_value_t = synth::DEFAULT_MODE_SPACING)]
    mode_spacing: f64,
    /// Also compute improved P&R and D&C at k = 5.
    #[arg(long)]
    with_baselines: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    /// Report files, one per model (at least two).
    #[arg(required = true, num_args = 2..)]
    scores: Vec<PathBuf>,
    /// Comma-separated metric fields to rank by.
    #[arg(long, value_delimiter = ',', default_value = "top_p,top_r,f1")]
    metrics: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_proj_dim(s: &str) -> Result<ProjDim, String> {
    if s == "none" {
        return Ok(ProjDim(None));
    }
    s.parse::<usize>()
        .map(|r| ProjDim(Some(r)))
        .map_err(|_| format!("expected a dimension or \"none\", got {s:?}"))
}

fn parse_balloon_k(s: &str) -> Result<BalloonK, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kernel(s: &str) -> Result<Kernel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<DensityVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::DegenerateData(_) | Error::KTooLarge { .. } | Error::TooFewRows { .. } | Error::OutOfRange { .. } => {
            EXIT_DEGENERATE
        }
        Error::BadAlpha(_) | Error::ZeroRepeats | Error::BadConfig(_) | Error::BadSpec(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("TOPPR_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("toppr: cannot start {n} worker threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let result = match cli.command {
        Command::Score(args) => score(args),
        Command::Baseline(args) => baseline(args),
        Command::Synth(args) => synth_sweep(args),
        Command::Rank(args) => rank_models(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toppr: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> toppr::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load(inputs: &Inputs) -> toppr::Result<(FeatureMatrix, FeatureMatrix)> {
    let real = io::read_features(&inputs.real, inputs.csv_header)?;
    let fake = io::read_features(&inputs.fake, inputs.csv_header)?;
    if real.cols() != fake.cols() {
        return Err(Error::DimMismatch {
            left: real.cols(),
            right: fake.cols(),
        });
    }
    Ok((real, fake))
}

fn score(args: ScoreArgs) -> toppr::Result<()> {
    let (real, fake) = load(&args.inputs)?;
    let report = top_pr(&real, &fake, &args.pipeline.config())?;
    emit(&Report::Score(report).to_json()?, args.out.as_deref())
}

fn baseline(args: BaselineArgs) -> toppr::Result<()> {
    let (real, fake) = load(&args.inputs)?;
    let mut report = BaselineReport {
        k: args.k,
        ..Default::default()
    };
    match args.metric {
        Metric::Pr => {
            let (p, r) = baselines::improved_pr(&real, &fake, args.k)?;
            report.precision = Some(p);
            report.recall = Some(r);
        }
        Metric::Dc => {
            let (d, c) = baselines::density_coverage(&real, &fake, args.k, args.dc_variant)?;
            report.density = Some(d);
            report.coverage = Some(c);
            report.dc_variant = Some(args.dc_variant);
        }
    }
    emit(&Report::Baseline(report).to_json()?, args.out.as_deref())
}

fn synth_sweep(args: SynthArgs) -> toppr::Result<()> {
    let kind = args.scenario;
    let steps = args.steps.unwrap_or(match kind {
        ScenarioKind::Shift => 13,
        ScenarioKind::ScatterNoise | ScenarioKind::SwapNoise => 4,
        _ => 11,
    });
    if steps == 0 {
        return Err(Error::BadSpec("need at least one step".into()));
    }
    let cfg = args.pipeline.config();
    let mut spec = ScenarioSpec::new(kind)
        .sizes(args.n, args.n)
        .dim(args.d)
        .seed(args.pipeline.seed);
    spec.mode_spacing = args.mode_spacing;
    if args.no_outliers {
        spec.outlier_coord = None;
    }
    if matches!(kind, ScenarioKind::ScatterNoise | ScenarioKind::SwapNoise) {
        spec.mu = args.mu;
    }

    let param = match kind {
        ScenarioKind::Shift => "mu",
        ScenarioKind::ScatterNoise | ScenarioKind::SwapNoise => "rho",
        _ => "progress",
    };
    let with_truth = kind.is_mode_drop() || kind == ScenarioKind::LongTail;
    let mut csv = format!("step,{param},top_p,top_r,f1");
    if with_truth {
        csv.push_str(",ground_truth_diversity");
    }
    if args.with_baselines {
        csv.push_str(",precision,recall,density,coverage");
    }
    csv.push('\n');

    for step in 0..steps {
        // fraction of the way through the sweep
        let t = if steps == 1 { 0.0 } else { step as f64 / (steps - 1) as f64 };
        let value = match kind {
            ScenarioKind::Shift => {
                spec.mu = -1.0 + 2.0 * t;
                spec.mu
            }
            ScenarioKind::ScatterNoise | ScenarioKind::SwapNoise => {
                spec.rho = args.rho_max * t;
                spec.rho
            }
            _ => {
                spec.progress = t;
                t
            }
        };
        let (real, fake) = synth::gen_pair(&spec)?;
        let report = top_pr(&real, &fake, &cfg)?;
        write!(csv, "{step},{value},{},{},{}", report.top_p, report.top_r, report.f1).unwrap();
        if with_truth {
            let truth = if kind == ScenarioKind::LongTail {
                synth::long_tail_diversity(&spec.long_tail, synth::long_tail_kept(&spec))
            } else {
                synth::ground_truth_diversity(kind, t, spec.num_modes)
            };
            write!(csv, ",{truth}").unwrap();
        }
        if args.with_baselines {
            let b = BaselineReport::compute(&real, &fake, DEFAULT_BASELINE_K, DensityVariant::Original)?;
            let f = |v: Option<f64>| v.unwrap_or(f64::NAN);
            write!(csv, ",{},{},{},{}", f(b.precision), f(b.recall), f(b.density), f(b.coverage)).unwrap();
        }
        csv.push('\n');
        eprintln!("toppr: {kind} step {}/{steps} done", step + 1);
    }
    emit(&csv, args.out.as_deref())
}

fn rank_models(args: RankArgs) -> toppr::Result<()> {
    let mut models = Vec::with_capacity(args.scores.len());
    for path in &args.scores {
        let text = fs::read_to_string(path)?;
        let doc: serde_json::Value = serde_json::from_str(&text)?;
        if doc.get("schema").and_then(|s| s.as_str()) != Some(io::SCHEMA) {
            return Err(Error::Shape(format!("{} is not a {} report", path.display(), io::SCHEMA)));
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        models.push((name, doc));
    }
    let report = rank::rank_models(&models, &args.metrics).map_err(|e| match e {
        // a missing metric field means the inputs do not fit the request
        Error::BadConfig(msg) => Error::Shape(msg),
        other => other,
    })?;
    let mut text = serde_json::to_string(&report)?;
    text.push('\n');
    emit(&text, args.out.as_deref())
}

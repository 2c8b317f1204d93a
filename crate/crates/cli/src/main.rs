use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use webclust::harness::{self, HarnessError, SweepConfig, SyntheticSpec};
use webclust::io::{self as wio, default_header};
use webclust::logs::{self, LogFormat, PipelineConfig};
use webclust::{
    dbscan, full_report, hierarchical, kmeans, kmedoids, leader, Clustering, KMeansParams, KMedoidsParams, Linkage,
    MedoidUpdate, ReferenceLabels,
};

#[derive(Parser)]
#[command(
    name = "webclust",
    version,
    about = "Web usage session clustering and cluster validity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn access logs into sessions and a session x URL dataset.
    Preprocess(PreprocessArgs),
    /// Cluster a dataset CSV.
    Cluster(ClusterArgs),
    /// Compute validity indices for a clustering.
    Evaluate(EvaluateArgs),
    /// Run a parameter sweep described by a config file.
    Sweep(SweepArgs),
    /// Generate labeled Gaussian blobs.
    Synth(SynthArgs),
    /// Cross-check all algorithms and indices against brute-force oracles.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Common,
    Combined,
}

#[derive(clap::Args)]
struct PreprocessArgs {
    #[arg(long, value_enum, default_value = "combined")]
    format: FormatArg,
    #[arg(long, default_value_t = 30.0)]
    timeout_min: f64,
    #[arg(long, default_value_t = 60.0)]
    last_dwell_s: f64,
    /// Keep query strings in URLs.
    #[arg(long)]
    keep_query: bool,
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out_sessions: PathBuf,
    #[arg(long)]
    out_dataset: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Kmeans,
    Kmedoids,
    Leader,
    Hier,
    Dbscan,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Single,
    Complete,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum MedoidArg {
    Unsquared,
    Squared,
}

#[derive(clap::Args)]
struct ClusterArgs {
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Cluster count (kmeans, kmedoids, hier).
    #[arg(long)]
    k: Option<usize>,
    /// Squared-distance threshold (leader).
    #[arg(long)]
    alpha: Option<f64>,
    /// Squared-distance neighborhood radius (dbscan).
    #[arg(long)]
    eps: Option<f64>,
    /// Minimum neighborhood size, point included (dbscan).
    #[arg(long)]
    eta: Option<usize>,
    #[arg(long, value_enum, default_value = "single")]
    linkage: LinkageArg,
    #[arg(long, value_enum, default_value = "unsquared")]
    medoid_update: MedoidArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also write cluster representatives here.
    #[arg(long)]
    out_reps: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    clustering: PathBuf,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `out` from the config file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SynthArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    per_cluster: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 10.0)]
    spread: f64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dataset: PathBuf,
    #[arg(long)]
    out_labels: PathBuf,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 50)]
    max_m: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn load_labels(path: &Path) -> Result<ReferenceLabels> {
    Ok(wio::read_labels(open(path)?)?)
}

fn preprocess(args: PreprocessArgs) -> Result<()> {
    let format = match args.format {
        FormatArg::Common => LogFormat::Common,
        FormatArg::Combined => LogFormat::Combined,
    };
    let mut entries = Vec::new();
    for path in &args.inputs {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let (parsed, rejected) = logs::parse_log(&text, format);
        for r in &rejected {
            eprintln!("{}: {r}", path.display());
        }
        entries.extend(parsed);
    }
    let config = PipelineConfig {
        timeout_s: args.timeout_min * 60.0,
        last_dwell_s: args.last_dwell_s,
        strip_query: !args.keep_query,
        ..PipelineConfig::default()
    };
    let out = logs::preprocess(&entries, &config)?;
    wio::write_sessions(create(&args.out_sessions)?, &out.sessions)?;
    wio::write_dataset(create(&args.out_dataset)?, &out.dataset, out.vocabulary.urls())?;
    let s = out.summary;
    println!("raw_entries\t{}", s.raw_entries);
    println!("cleaned_entries\t{}", s.cleaned_entries);
    println!("users\t{}", s.users);
    println!("sessions\t{}", s.sessions);
    println!("urls\t{}", s.urls);
    Ok(())
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let (data, _) = wio::read_dataset(open(&args.input)?)?;
    let need_k = || args.k.context("--k is required for this algorithm");
    let clustering: Clustering = match args.algo {
        AlgoArg::Kmeans => kmeans(
            &data,
            &KMeansParams {
                k: need_k()?,
                seed: args.seed,
                tol: args.tol,
                max_iter: args.max_iter,
            },
        )?,
        AlgoArg::Kmedoids => kmedoids(
            &data,
            &KMedoidsParams {
                k: need_k()?,
                seed: args.seed,
                max_iter: args.max_iter,
                update: match args.medoid_update {
                    MedoidArg::Unsquared => MedoidUpdate::Unsquared,
                    MedoidArg::Squared => MedoidUpdate::Squared,
                },
            },
        )?,
        AlgoArg::Leader => leader(&data, args.alpha.context("--alpha is required for leader")?)?,
        AlgoArg::Hier => {
            let linkage = match args.linkage {
                LinkageArg::Single => Linkage::Single,
                LinkageArg::Complete => Linkage::Complete,
                LinkageArg::Average => Linkage::Average,
            };
            hierarchical(&data, need_k()?, linkage)?
        }
        AlgoArg::Dbscan => dbscan(
            &data,
            args.eps.context("--eps is required for dbscan")?,
            args.eta.context("--eta is required for dbscan")?,
        )?,
    };
    wio::write_clustering(create(&args.out)?, &clustering)?;
    if let Some(path) = &args.out_reps {
        match clustering.representatives() {
            Some(reps) => wio::write_representatives(create(path)?, reps)?,
            None => bail!("this algorithm produces no representatives"),
        }
    }
    println!("clusters\t{}", clustering.k());
    println!("noise\t{}", clustering.noise_count());
    if let Some(j) = clustering.objective() {
        println!("objective\t{j}");
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let (data, _) = wio::read_dataset(open(&args.dataset)?)?;
    let clustering = wio::read_clustering(open(&args.clustering)?)?;
    let labels = args.labels.as_deref().map(load_labels).transpose()?;
    let report = full_report(&data, &clustering, labels.as_ref());
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    w.write_record(["index", "value", "note"])?;
    for (name, value) in report.entries() {
        match value {
            Ok(v) => w.write_record([name, &v.to_string(), ""])?,
            Err(e) => w.write_record([name, "", &e.to_string()])?,
        }
    }
    w.flush()?;
    Ok(())
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_owned()
    } else {
        base.join(path)
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let config = SweepConfig::parse(&text)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let dataset = config.dataset.as_deref().context("config has no `dataset`")?;
    let (data, _) = wio::read_dataset(open(&resolve(base, dataset))?)?;
    let labels = config
        .labels
        .as_deref()
        .map(|p| load_labels(&resolve(base, p)))
        .transpose()?;
    let rows = harness::run_sweep(&config, &data, labels.as_ref())?;
    match args.out.or_else(|| config.out.as_deref().map(|p| resolve(base, p))) {
        Some(path) => harness::emit_report(create(&path)?, &rows, config.format)?,
        None => harness::emit_report(io::stdout().lock(), &rows, config.format)?,
    }
    if let Some(dir) = &config.series_dir {
        harness::write_series(&resolve(base, dir), &rows)?;
    }
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        clusters: args.k,
        per_cluster: args.per_cluster,
        dim: args.dim,
        spread: args.spread,
        scale: args.scale,
        seed: args.seed,
    };
    let (data, labels) = harness::generate_synthetic(&spec)?;
    wio::write_dataset(create(&args.out_dataset)?, &data, &default_header(data.dim()))?;
    wio::write_labels(create(&args.out_labels)?, &labels)?;
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<bool> {
    match harness::oracle_trials(args.max_m, args.trials, args.seed) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            writeln!(out, "check\tcases\tmax_deviation\tstatus")?;
            for s in &report.checks {
                writeln!(out, "{}\t{}\t{:e}\tPASS", s.name, s.cases, s.max_deviation)?;
            }
            Ok(true)
        }
        Err(HarnessError::OracleMismatch(m)) => {
            println!("FAIL {}: {}", m.check, m.detail);
            println!("replay instance: {}", m.instance);
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Preprocess(a) => preprocess(a).map(|_| true),
        Command::Cluster(a) => cluster(a).map(|_| true),
        Command::Evaluate(a) => evaluate(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Synth(a) => synth(a).map(|_| true),
        Command::OracleCheck(a) => oracle_check(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use edgeboost::benchgen::{self, BenchmarkSpec};
use edgeboost::community::CommunityDetector;
use edgeboost::io::{self, LabeledGraph, NodeLabels};
use edgeboost::linkpred::{intra_edge_precision, score_all};
use edgeboost::{boost, BoostConfig, DetectorKind, Error, EvalReport, ExternalDetector, PredictorKind};

mod sweep;

#[derive(Parser)]
#[command(name = "edgeboost", version, about = "Community detection on incomplete networks")]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-partition benchmark network.
    Generate(GenerateArgs),
    /// Delete a random fraction of the edges of a network.
    Perturb(PerturbArgs),
    /// Run a community detector once.
    Detect(DetectArgs),
    /// Run the boosted detection pipeline.
    Boost(BoostArgs),
    /// Compare a partition with a ground truth.
    Eval(EvalArgs),
    /// Baseline vs boosted detection over a parameter grid.
    Sweep(sweep::SweepArgs),
    /// Intra-community precision of link-predictor rankings.
    LinkpredEval(LinkpredEvalArgs),
}

#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long, default_value_t = 1000)]
    nodes: usize,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 50)]
    max_degree: usize,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    degree_exponent: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    community_exponent: f64,
    #[arg(long, default_value_t = 10)]
    min_community: usize,
    #[arg(long, default_value_t = 50)]
    max_community: usize,
}

impl SpecArgs {
    fn spec(&self, mu: f64, delta: f64, seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            n_nodes: self.nodes,
            avg_degree: self.avg_degree,
            max_degree: self.max_degree,
            degree_exponent: self.degree_exponent,
            community_exponent: self.community_exponent,
            min_community: self.min_community,
            max_community: self.max_community,
            mu,
            delta,
            seed,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    mu: f64,
    /// Fraction of edges to delete after generation.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, env = "EDGEBOOST_SEED", default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.edges and PREFIX.truth.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PerturbArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long, env = "EDGEBOOST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct DetectorArgs {
    /// louvain or label-propagation.
    #[arg(long, default_value = "louvain")]
    detector: String,
    /// External detector command; overrides --detector.
    #[arg(long)]
    detector_cmd: Option<String>,
}

impl DetectorArgs {
    fn build(&self) -> anyhow::Result<Arc<dyn CommunityDetector>> {
        Ok(match &self.detector_cmd {
            Some(cmd) => Arc::new(ExternalDetector::from_command_line(cmd)?),
            None => Arc::new(self.detector.parse::<DetectorKind>()?),
        })
    }
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long, env = "EDGEBOOST_SEED", default_value_t = 0)]
    seed: u64,
    /// Partition file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BoostArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    detector: DetectorArgs,
    /// jaccard, adamic-adar or common-neighbors.
    #[arg(long, default_value = "jaccard")]
    predictor: String,
    #[arg(long, default_value_t = boost::DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, env = "EDGEBOOST_SEED", default_value_t = 0)]
    seed: u64,
    /// Sample exactly this many edges per iteration.
    #[arg(long)]
    fixed_k: Option<usize>,
    /// Prune the co-community network at this threshold instead of choosing one.
    #[arg(long)]
    tau: Option<f64>,
    /// Writes PREFIX.partition and PREFIX.tau.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    partition: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Print one CSV row with a header instead of key/value lines.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct LinkpredEvalArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Predictor name or `all`.
    #[arg(long, default_value = "all")]
    predictor: String,
    /// Comma-separated cutoffs in percent of the original edge count.
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,30,40,50")]
    kpercents: Vec<f64>,
    /// Edge count before deletion (default: edges in the file).
    #[arg(long)]
    original_edges: Option<usize>,
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn read_graph(path: &Path) -> anyhow::Result<LabeledGraph> {
    io::read_edge_list_path(path).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let spec = args.spec.spec(args.mu, args.delta, args.seed);
    let net = benchgen::generate_incomplete(&spec)?;
    let labels = NodeLabels::identity(net.graph.node_count());
    io::write_edge_list(create(&with_extension(&args.out, "edges"))?, &net.graph, &labels)?;
    io::write_partition(create(&with_extension(&args.out, "truth"))?, &net.truth, &labels)?;
    println!("nodes\t{}", net.graph.node_count());
    println!("edges\t{}", net.graph.edge_count());
    println!("communities\t{}", net.truth.community_count());
    println!("mixing\t{:.4}", net.measured_mixing());
    Ok(())
}

fn perturb(args: PerturbArgs) -> anyhow::Result<()> {
    let lg = read_graph(&args.edges)?;
    let spec = edgeboost::DeletionSpec::new(args.delta, args.seed)?;
    let g = lg.graph.delete_edges_random(&spec)?;
    io::write_edge_list(create(&args.out)?, &g, &lg.labels)?;
    println!("edges\t{}", g.edge_count());
    Ok(())
}

fn detect_cmd(args: DetectArgs) -> anyhow::Result<()> {
    let lg = read_graph(&args.edges)?;
    let p = args.detector.build()?.detect(&lg.graph, args.seed)?;
    io::write_partition(create(&args.out)?, &p, &lg.labels)?;
    println!("communities\t{}", p.community_count());
    Ok(())
}

fn boost_cmd(args: BoostArgs) -> anyhow::Result<()> {
    let lg = read_graph(&args.edges)?;
    let cfg = BoostConfig::with_detector(args.detector.build()?)
        .with_predictor(args.predictor.parse::<PredictorKind>()?)
        .with_iterations(args.iterations)
        .with_seed(args.seed)
        .with_fixed_k(args.fixed_k)
        .with_fixed_tau(args.tau);
    let out = boost::run(&lg.graph, &cfg)?;
    io::write_partition(create(&with_extension(&args.out, "partition"))?, out.partition(), &lg.labels)?;
    io::write_tau_scores(create(&with_extension(&args.out, "tau.csv"))?, &out.consensus.per_tau)?;
    if out.diagnostics.degraded {
        eprintln!("warning: no candidate edges to impute; every iteration clustered the input graph");
    }
    println!("tau\t{}", out.consensus.tau);
    println!("score\t{}", out.consensus.score);
    println!("communities\t{}", out.partition().community_count());
    Ok(())
}

fn eval_cmd(args: EvalArgs) -> anyhow::Result<()> {
    let (labels, truth) = io::read_labeled_partition_path(&args.truth)
        .with_context(|| format!("reading {}", args.truth.display()))?;
    let inferred = io::read_partition_path(&args.partition, &labels)
        .with_context(|| format!("reading {}", args.partition.display()))?;
    let r = EvalReport::compare(&inferred, &truth)?;
    if args.csv {
        println!("nmi,relative_error,n_inferred,n_truth");
        println!("{},{},{},{}", r.nmi, r.relative_error, r.n_inferred, r.n_truth);
    } else {
        println!("nmi\t{}", r.nmi);
        println!("relative_error\t{}", r.relative_error);
        println!("n_inferred\t{}", r.n_inferred);
        println!("n_truth\t{}", r.n_truth);
    }
    Ok(())
}

fn linkpred_eval(args: LinkpredEvalArgs) -> anyhow::Result<()> {
    let lg = read_graph(&args.edges)?;
    let truth = io::read_partition_path(&args.truth, &lg.labels)
        .with_context(|| format!("reading {}", args.truth.display()))?;
    let kinds: Vec<PredictorKind> = if args.predictor == "all" {
        PredictorKind::ALL.to_vec()
    } else {
        vec![args.predictor.parse()?]
    };
    let original = args.original_edges.unwrap_or(lg.graph.edge_count());
    if let Some(bad) = args.kpercents.iter().find(|k| !(**k > 0.0 && **k <= 100.0)) {
        bail!(Error::Config(format!("k percent {bad} outside (0, 100]")));
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "predictor,k_percent,precision")?;
    for kind in kinds {
        let scored = score_all(&lg.graph, kind);
        for &k in &args.kpercents {
            let precision = intra_edge_precision(&scored, &truth, k / 100.0, original)?;
            writeln!(out, "{},{},{}", kind.name(), k, precision)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Perturb(a) => perturb(a),
        Command::Detect(a) => detect_cmd(a),
        Command::Boost(a) => boost_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Sweep(a) => sweep::run(a),
        Command::LinkpredEval(a) => linkpred_eval(a),
    }
}

/// 1 for usage and configuration mistakes, 3 for infeasible benchmark
/// specs, 2 for everything else (bad input data, I/O, detector failures).
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Config(_)) => 1,
        Some(Error::Infeasible(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

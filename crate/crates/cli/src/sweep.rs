//! `sweep`: baseline and boosted detection on generated benchmarks over a
//! grid of mixing and deletion values.
//!
//! Rows are computed in parallel a chunk at a time and appended in grid
//! order, so the file is identical for any thread count. Rerunning with the
//! same output file skips rows already present.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::Args;
use edgeboost::metrics::{nmi, relative_error};
use edgeboost::{benchgen, boost, BoostConfig, Error, PredictorKind};
use rayon::prelude::*;

use crate::{DetectorArgs, SpecArgs};

const HEADER: [&str; 13] = [
    "mu",
    "delta",
    "seed",
    "detector",
    "predictor",
    "n_iterations",
    "nmi_baseline",
    "nmi_boosted",
    "re_baseline",
    "re_boosted",
    "chosen_tau",
    "wall_time_ms",
    "error",
];

#[derive(Args)]
pub struct SweepArgs {
    /// `mu=v1,v2,...` or `delta=start:stop:step`; repeat for both axes.
    #[arg(long, required = true)]
    grid: Vec<String>,
    /// Number of benchmark seeds per grid cell.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long, default_value = "jaccard")]
    predictor: String,
    #[arg(long, default_value_t = boost::DEFAULT_ITERATIONS)]
    iterations: usize,
    /// CSV file; appended to when it already exists.
    #[arg(long)]
    out: PathBuf,
    /// Write 0 for wall_time_ms so that output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

/// Parses `v1,v2,...` or an inclusive `start:stop:step` range.
fn parse_values(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Config(format!("cannot parse grid values {spec:?}"));
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect())
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    }
}

fn parse_grid(entries: &[String]) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let (mut mu, mut delta) = (None, None);
    for entry in entries {
        let (axis, values) = entry
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("grid entry {entry:?} lacks `=`")))?;
        let values = parse_values(values)?;
        match axis.trim() {
            "mu" => mu = Some(values),
            "delta" => delta = Some(values),
            other => return Err(Error::Config(format!("unknown grid axis {other:?}"))),
        }
    }
    Ok((mu.unwrap_or_else(|| vec![0.1]), delta.unwrap_or_else(|| vec![0.0])))
}

struct Task {
    mu: f64,
    delta: f64,
    seed: u64,
}

struct Row {
    key: [String; 6],
    values: Result<[f64; 5], String>,
    wall_ms: u128,
}

fn key(args: &SweepArgs, detector: &str, task: &Task) -> [String; 6] {
    [
        task.mu.to_string(),
        task.delta.to_string(),
        task.seed.to_string(),
        detector.to_owned(),
        args.predictor.clone(),
        args.iterations.to_string(),
    ]
}

pub fn run(args: SweepArgs) -> anyhow::Result<()> {
    let (mus, deltas) = parse_grid(&args.grid)?;
    let detector = args.detector.build()?;
    let detector_name = detector.name();
    let predictor: PredictorKind = args.predictor.parse()?;
    let cfg = BoostConfig::with_detector(detector.clone())
        .with_predictor(predictor)
        .with_iterations(args.iterations);

    let mut done: HashSet<[String; 6]> = HashSet::new();
    let exists = args.out.exists() && std::fs::metadata(&args.out)?.len() > 0;
    if exists {
        let mut reader = csv::Reader::from_path(&args.out)
            .with_context(|| format!("reading {}", args.out.display()))?;
        if reader.headers()?.iter().ne(HEADER) {
            bail!(Error::Config(format!(
                "{} exists with a different header",
                args.out.display()
            )));
        }
        for record in reader.records() {
            let record = record?;
            let k: Vec<String> = record.iter().take(6).map(str::to_owned).collect();
            if let Ok(k) = <[String; 6]>::try_from(k) {
                done.insert(k);
            }
        }
    }

    let tasks: Vec<Task> = mus
        .iter()
        .flat_map(|&mu| {
            deltas.iter().flat_map(move |&delta| {
                (args.base_seed..args.base_seed + args.seeds).map(move |seed| Task { mu, delta, seed })
            })
        })
        .filter(|t| !done.contains(&key(&args, &detector_name, t)))
        .collect();

    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&args.out)
        .with_context(|| format!("opening {}", args.out.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    if !exists {
        writer.write_record(HEADER)?;
        writer.flush()?;
    }

    let chunk = 2 * rayon::current_num_threads().max(1);
    for batch in tasks.chunks(chunk) {
        let rows: Vec<Row> = batch
            .par_iter()
            .map(|task| {
                let start = Instant::now();
                let values = evaluate(&args, &cfg, task).map_err(|e| e.to_string());
                Row {
                    key: key(&args, &detector_name, task),
                    values,
                    wall_ms: start.elapsed().as_millis(),
                }
            })
            .collect();
        for row in rows {
            let wall = if args.no_timing { 0 } else { row.wall_ms };
            let mut record: Vec<String> = row.key.to_vec();
            match row.values {
                Ok(v) => {
                    record.extend(v.iter().map(f64::to_string));
                    record.push(wall.to_string());
                    record.push(String::new());
                }
                Err(e) => {
                    record.extend(std::iter::repeat_n(String::new(), 5));
                    record.push(wall.to_string());
                    record.push(e);
                }
            }
            writer.write_record(&record)?;
        }
        writer.flush()?;
    }
    Ok(())
}

/// `[nmi_baseline, nmi_boosted, re_baseline, re_boosted, chosen_tau]`.
fn evaluate(args: &SweepArgs, cfg: &BoostConfig, task: &Task) -> edgeboost::Result<[f64; 5]> {
    let spec = args.spec.spec(task.mu, task.delta, task.seed);
    let net = benchgen::generate_incomplete(&spec)?;
    let base = cfg.detector.detect(&net.graph, task.seed)?;
    let out = boost::run(&net.graph, &cfg.clone().with_seed(task.seed))?;
    Ok([
        nmi(&base, &net.truth)?,
        nmi(out.partition(), &net.truth)?,
        relative_error(&base, &net.truth)?,
        relative_error(out.partition(), &net.truth)?,
        out.consensus.tau,
    ])
}

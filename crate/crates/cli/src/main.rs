use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use paire_cli::commands;
use paire_cli::repro;
use paire_cli::RunConfig;

#[derive(Parser)]
#[command(name = "paire", version, about = "Pair-level graph embedding pipelines")]
struct Cli {
    /// Worker threads for parallel sections (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train on a graph and write pair embeddings, checkpoint and training log.
    Embed(Opts),
    /// Pool pair embeddings into node embeddings.
    Translate(Opts),
    /// Global and local label assortativity reports.
    Assort(Opts),
    /// Node classification over repeated splits.
    EvalNode(Opts),
    /// Edge classification over repeated splits.
    EvalEdge(Opts),
    /// Link prediction with an edge holdout.
    EvalLink(Opts),
    /// Run a stored benchmark and compare with its reported number.
    Repro {
        /// One of: cornell, wisconsin, cora, cuneiform-edge.
        dataset: String,
        /// Directory holding one subdirectory per dataset.
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// `key = value` config file; flags override it.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    node_labels: Option<PathBuf>,
    #[arg(long)]
    edge_labels: Option<PathBuf>,
    #[arg(long)]
    directed: bool,
    /// Shift every feature column by its minimum before normalization.
    #[arg(long)]
    shift_nonneg: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    weight_ego: Option<f64>,
    #[arg(long)]
    translator: Option<String>,
    #[arg(long)]
    train_ratio: Option<f64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Previously written pair embeddings to use instead of training.
    #[arg(long)]
    pair_embeddings: Option<PathBuf>,
    /// Previously written node embeddings to use instead of training.
    #[arg(long)]
    node_embeddings: Option<PathBuf>,
    /// Any other config key, as KEY=VALUE.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Opts {
    fn resolve(&self, workers: Option<usize>) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push((k.to_string(), v));
            }
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        put("edges", path(&self.edges));
        put("features", path(&self.features));
        put("node_labels", path(&self.node_labels));
        put("edge_labels", path(&self.edge_labels));
        put("directed", self.directed.then(|| "true".into()));
        put("shift_nonneg", self.shift_nonneg.then(|| "true".into()));
        put("out", path(&self.out));
        put("seed", self.seed.map(|v| v.to_string()));
        put("epochs", self.epochs.map(|v| v.to_string()));
        put("batch_size", self.batch_size.map(|v| v.to_string()));
        put("learning_rate", self.learning_rate.map(|v| v.to_string()));
        put("weight_ego", self.weight_ego.map(|v| v.to_string()));
        put("translator", self.translator.clone());
        put("train_ratio", self.train_ratio.map(|v| v.to_string()));
        put("n_repeats", self.repeats.map(|v| v.to_string()));
        put("pair_embeddings", path(&self.pair_embeddings));
        put("node_embeddings", path(&self.node_embeddings));
        put("workers", workers.map(|v| v.to_string()));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("--set expects KEY=VALUE, got `{kv}`"))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        for (k, v) in pairs {
            cfg.set(&k, &v, None).with_context(|| format!("option `{k}`"))?;
        }
        cfg.apply_seed_env()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (opts, repro_args) = match &cli.command {
        Command::Embed(o)
        | Command::Translate(o)
        | Command::Assort(o)
        | Command::EvalNode(o)
        | Command::EvalEdge(o)
        | Command::EvalLink(o) => (o.clone(), None),
        Command::Repro { dataset, data_dir, opts } => (opts.clone(), Some((dataset.clone(), data_dir.clone()))),
    };
    let cfg = opts.resolve(cli.workers)?;
    if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global()
            .context("configuring worker pool")?;
    }
    match cli.command {
        Command::Embed(_) => println!("{}", commands::embed(&cfg)?.display()),
        Command::Translate(_) => println!("{}", commands::translate(&cfg)?.display()),
        Command::Assort(_) => {
            for line in commands::assort(&cfg)? {
                println!("{line}");
            }
        }
        Command::EvalNode(_) | Command::EvalEdge(_) | Command::EvalLink(_) => {
            let report = match cli.command {
                Command::EvalNode(_) => commands::eval_node(&cfg)?,
                Command::EvalEdge(_) => commands::eval_edge(&cfg)?,
                _ => commands::eval_link(&cfg)?,
            };
            for line in commands::summary_lines(&report) {
                println!("{line}");
            }
            for flag in &report.flags {
                log::warn!("{flag}");
            }
        }
        Command::Repro { .. } => {
            let (dataset, data_dir) = repro_args.expect("repro arguments");
            let bench = repro::benchmark(&dataset).with_context(|| {
                let known: Vec<_> = repro::BENCHMARKS.iter().map(|b| b.tag).collect();
                format!("unknown dataset `{dataset}` (known: {})", known.join(", "))
            })?;
            let mut cfg = cfg;
            if opts.out.is_none() && !opts.set.iter().any(|s| s.starts_with("out")) {
                cfg.out = cfg.out.join(bench.tag);
            }
            let outcome = repro::run(bench, &data_dir, &cfg)?;
            println!("{}", outcome.line());
            return Ok(outcome.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

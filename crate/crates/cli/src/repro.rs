//! Stored benchmark numbers and the runs that compare against them.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use paire::eval::EvalReport;

use crate::commands;
use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Node,
    Edge,
}

/// One benchmark row: reported mean ± std (Micro-F1 × 100) and the minimum
/// run mean (as a fraction) that counts as reproduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benchmark {
    pub tag: &'static str,
    pub dir: &'static str,
    pub task: Task,
    pub shift_nonneg: bool,
    pub reported_mean: f64,
    pub reported_std: f64,
    pub threshold: f64,
}

pub const BENCHMARKS: [Benchmark; 4] = [
    Benchmark {
        tag: "cornell",
        dir: "cornell",
        task: Task::Node,
        shift_nonneg: false,
        reported_mean: 66.73,
        reported_std: 7.77,
        threshold: 0.55,
    },
    Benchmark {
        tag: "wisconsin",
        dir: "wisconsin",
        task: Task::Node,
        shift_nonneg: false,
        reported_mean: 68.00,
        reported_std: 9.98,
        threshold: 0.55,
    },
    Benchmark {
        tag: "cora",
        dir: "cora",
        task: Task::Node,
        shift_nonneg: false,
        reported_mean: 86.51,
        reported_std: 8.52,
        threshold: 0.78,
    },
    Benchmark {
        tag: "cuneiform-edge",
        dir: "cuneiform",
        task: Task::Edge,
        shift_nonneg: true,
        reported_mean: 95.71,
        reported_std: 1.54,
        threshold: 0.90,
    },
];

pub fn benchmark(tag: &str) -> Option<&'static Benchmark> {
    BENCHMARKS.iter().find(|b| b.tag == tag)
}

/// Dataset files expected under `<root>/<dir>/`.
pub fn dataset_paths(root: &Path, b: &Benchmark) -> Result<(PathBuf, PathBuf, PathBuf)> {
    let dir = root.join(b.dir);
    let labels = match b.task {
        Task::Node => "node_labels.txt",
        Task::Edge => "edge_labels.txt",
    };
    let files = (dir.join("edges.tsv"), dir.join("features.txt"), dir.join(labels));
    for f in [&files.0, &files.1, &files.2] {
        if !f.exists() {
            bail!(
                "{}: dataset file {} not found (run scripts/prepare_datasets.py)",
                b.tag,
                f.display()
            );
        }
    }
    Ok(files)
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub bench: Benchmark,
    pub report: EvalReport,
    pub mean: f64,
    pub std: f64,
    pub passed: bool,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "repro {}: reported {:.2} ± {:.2}, run {:.2} ± {:.2} (Micro-F1 x100, {} splits), threshold {:.2} -> {}",
            self.bench.tag,
            self.bench.reported_mean,
            self.bench.reported_std,
            100.0 * self.mean,
            100.0 * self.std,
            self.report.repeats(),
            100.0 * self.bench.threshold,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs the full pipeline for `b` with `base` settings (paths are replaced
/// by the dataset's files; the graph is read as undirected).
pub fn run(b: &Benchmark, data_root: &Path, base: &RunConfig) -> Result<Outcome> {
    let (edges, features, labels) = dataset_paths(data_root, b)?;
    let mut cfg = base.clone();
    cfg.edges = Some(edges);
    cfg.features = Some(features);
    cfg.directed = false;
    cfg.shift_nonneg = b.shift_nonneg;
    cfg.pair_embeddings = None;
    cfg.node_embeddings = None;
    match b.task {
        Task::Node => {
            cfg.node_labels = Some(labels);
            cfg.edge_labels = None;
        }
        Task::Edge => {
            cfg.edge_labels = Some(labels);
            cfg.node_labels = None;
        }
    }
    let report = match b.task {
        Task::Node => commands::eval_node(&cfg)?,
        Task::Edge => commands::eval_edge(&cfg)?,
    };
    let mean = report.mean("micro_f1").unwrap_or(f64::NAN);
    let std = report.std("micro_f1").unwrap_or(f64::NAN);
    Ok(Outcome {
        bench: *b,
        passed: mean >= b.threshold,
        report,
        mean,
        std,
    })
}

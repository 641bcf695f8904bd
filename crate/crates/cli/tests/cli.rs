//! The `paire` binary end to end on a small generated graph.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use paire::synthetic::random_graph;
use paire::textio::{read_matrix, write_matrix};

struct Fixture {
    _tmp: tempfile::TempDir,
    dir: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().to_path_buf();
        let g = random_graph(40, 90, 4, 3, 21);
        let text: String = g.edges().iter().map(|(u, v)| format!("{u}\t{v}\n")).collect();
        std::fs::write(dir.join("edges.tsv"), text).unwrap();
        write_matrix(&dir.join("features.txt"), g.features().view()).unwrap();
        let nl = g.node_labels().unwrap().mapv(f64::from);
        write_matrix(&dir.join("node_labels.txt"), nl.view()).unwrap();
        let el = paire::ndarray::Array2::from_shape_fn((g.n_edges(), 2), |(i, j)| ((i % 2) == j) as u8 as f64);
        write_matrix(&dir.join("edge_labels.txt"), el.view()).unwrap();
        Fixture { _tmp: tmp, dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_paire"))
            .current_dir(&self.dir)
            .args(args)
            .env_remove("PAIRE_SEED")
            .output()
            .unwrap()
    }
}

const GRAPH: [&str; 6] = ["--edges", "edges.tsv", "--features", "features.txt", "--epochs", "2"];

fn resolved(out: &Path) -> String {
    std::fs::read_to_string(out.join("config.resolved")).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn embed_writes_outputs_and_echoes_config() {
    let f = Fixture::new();
    let o = f.run(&[&["embed", "--out", "run", "--set", "hidden1=4"][..], &GRAPH].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = f.path("run");
    for file in ["pair_embeddings.txt", "pairs.tsv", "checkpoint.paire", "train_log.csv", "config.resolved"] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    let emb = read_matrix(&out.join("pair_embeddings.txt")).unwrap();
    assert_eq!(emb.ncols(), 2 * (4 + 32));
    let echo = resolved(&out);
    assert!(echo.contains("hidden1 = 4"));
    assert!(echo.contains("epochs = 2"));
    assert!(echo.contains("weight_ego = 0.5"));
    let log = std::fs::read_to_string(out.join("train_log.csv")).unwrap();
    assert_eq!(log.lines().count(), 3);
}

#[test]
fn flags_override_config_file_and_seed_env_is_fallback() {
    let f = Fixture::new();
    std::fs::write(
        f.path("run.conf"),
        "# test config\nedges = edges.tsv\nfeatures = features.txt\nepochs = 1\nweight_ego = 0.3\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_paire"))
        .current_dir(&f.dir)
        .args(["embed", "--config", "run.conf", "--weight-ego", "0.7", "--out", "a"])
        .env("PAIRE_SEED", "42")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let echo = resolved(&f.path("a"));
    assert!(echo.contains("weight_ego = 0.7"));
    assert!(echo.contains("seed = 42"));
    assert!(echo.contains("epochs = 1"));

    let o = Command::new(env!("CARGO_BIN_EXE_paire"))
        .current_dir(&f.dir)
        .args(["embed", "--config", "run.conf", "--seed", "3", "--out", "b"])
        .env("PAIRE_SEED", "42")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(resolved(&f.path("b")).contains("seed = 3"));
}

#[test]
fn bad_input_exits_with_error() {
    let f = Fixture::new();
    let o = f.run(&[&["embed", "--set", "weight_agg=0.2"][..], &GRAPH].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("derived"));

    let o = f.run(&[&["embed", "--set", "colour=red"][..], &GRAPH].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown config key"));

    let o = f.run(&["embed", "--edges", "nope.tsv", "--features", "features.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not exist"));

    let o = f.run(&[&["embed", "--weight-ego", "1.5"][..], &GRAPH].concat());
    assert_eq!(o.status.code(), Some(1));

    let o = f.run(&["repro", "pubmed"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown dataset"));

    let o = f.run(&["repro", "cora", "--data-dir", "missing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not found"));
}

#[test]
fn translate_reuses_pair_embeddings() {
    let f = Fixture::new();
    assert!(f.run(&[&["embed", "--out", "e"][..], &GRAPH].concat()).status.success());
    let o = f.run(&[
        "translate",
        "--edges",
        "edges.tsv",
        "--features",
        "features.txt",
        "--pair-embeddings",
        "e/pair_embeddings.txt",
        "--translator",
        "mean",
        "--out",
        "t",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ne = read_matrix(&f.path("t/node_embeddings.txt")).unwrap();
    assert_eq!(ne.dim(), (40, 128));
    assert!(!f.path("t/checkpoint.paire").exists());
}

#[test]
fn assort_writes_reports() {
    let f = Fixture::new();
    let o = f.run(&[
        "assort",
        "--edges",
        "edges.tsv",
        "--features",
        "features.txt",
        "--node-labels",
        "node_labels.txt",
        "--edge-labels",
        "edge_labels.txt",
        "--out",
        "a",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for scope in ["node", "edge"] {
        for suffix in ["global.csv", "hist.csv", "hist.dat", "strata.csv"] {
            assert!(f.path(&format!("a/assort_{scope}_{suffix}")).exists(), "{scope} {suffix}");
        }
    }
    let global = std::fs::read_to_string(f.path("a/assort_node_global.csv")).unwrap();
    assert!(global.starts_with("scope,label,neighborhood,r"));
}

#[test]
fn evaluation_commands_write_reports() {
    let f = Fixture::new();
    let base = [&GRAPH[..], &["--repeats", "2"]].concat();
    let node = f.run(&[&["eval-node", "--node-labels", "node_labels.txt", "--out", "n"][..], &base].concat());
    assert!(node.status.success(), "{}", stderr(&node));
    let edge = f.run(&[&["eval-edge", "--edge-labels", "edge_labels.txt", "--out", "e"][..], &base].concat());
    assert!(edge.status.success(), "{}", stderr(&edge));
    let link = f.run(&[&["eval-link", "--out", "l"][..], &base].concat());
    assert!(link.status.success(), "{}", stderr(&link));
    for (dir, task) in [("n", "node"), ("e", "edge"), ("l", "link")] {
        let raw = std::fs::read_to_string(f.path(&format!("{dir}/eval_{task}_raw.csv"))).unwrap();
        assert!(raw.starts_with("task,ratio,repeat,metric,value"));
        let summary = std::fs::read_to_string(f.path(&format!("{dir}/eval_{task}_summary.csv"))).unwrap();
        assert!(summary.lines().count() >= 2);
    }
    let stdout = String::from_utf8_lossy(&link.stdout);
    assert!(stdout.contains("roc_auc"));
}

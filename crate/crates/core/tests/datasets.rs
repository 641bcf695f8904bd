//! Checks against the published dataset statistics. The files come from
//! `scripts/prepare_datasets.py`; tests skip with a note when they are absent.

use std::path::PathBuf;

use paire::*;

fn data_dir(name: &str) -> Option<PathBuf> {
    let root = std::env::var_os("PAIRE_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    let dir = root.join(name);
    if dir.join("edges.tsv").exists() {
        Some(dir)
    } else {
        eprintln!("skipping: {} not found", dir.display());
        None
    }
}

fn load(dir: &PathBuf, node_labels: bool, edge_labels: bool, directed: bool) -> Graph {
    let nl = dir.join("node_labels.txt");
    let el = dir.join("edge_labels.txt");
    load_graph(
        GraphPaths {
            edges: &dir.join("edges.tsv"),
            features: &dir.join("features.txt"),
            node_labels: node_labels.then_some(nl.as_path()),
            edge_labels: edge_labels.then_some(el.as_path()),
        },
        directed,
    )
    .unwrap()
}

#[test]
fn cuneiform_size_matches_table() {
    let Some(dir) = data_dir("cuneiform") else { return };
    let g = load(&dir, true, true, true);
    assert_eq!(g.n_nodes(), 5680);
    assert_eq!(g.n_edges(), 23922);
    assert_eq!(g.feature_dim(), 3);
}

#[test]
fn cuneiform_edge_assortativity_matches_table() {
    let Some(dir) = data_dir("cuneiform") else { return };
    let g = load(&dir, false, true, true);
    let report = assortativity_report(&g, Scope::Edge).unwrap();
    let (label, r) = &report.global[0];
    let r = r.expect("defined");
    eprintln!("cuneiform r_e[{label}] = {r:.4}");
    assert!((r - 0.26).abs() < 0.005, "r_e = {r}");
}

#[test]
fn cora_pairs_double_the_edges() {
    let Some(dir) = data_dir("cora") else { return };
    let g = load(&dir, true, false, false);
    assert_eq!(g.n_nodes(), 2708);
    assert_eq!(g.feature_dim(), 1433);
    let ps = enumerate_pairs(&g);
    let loops = g.edges().iter().filter(|(u, v)| u == v).count();
    assert_eq!(ps.len(), 2 * (g.n_edges() - loops));
    // the raw list has 5429 lines; reciprocal and repeated citations collapse
    eprintln!("cora: {} distinct undirected edges, {} pairs", g.n_edges(), ps.len());
    assert!(g.n_edges() <= 5429);
}

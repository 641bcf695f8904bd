//! Fixtures shared by the benchmarks.

use paire::synthetic::random_graph;
use paire::{build_dataset, enumerate_pairs, Graph, PairFeatureTable};

/// Random graph with `n_edges` edges on `n_edges / 4` nodes, plus its pair
/// feature table.
pub fn fixture(n_edges: usize, feat_dim: usize, seed: u64) -> (Graph, PairFeatureTable) {
    let g = random_graph((n_edges / 4).max(8), n_edges, feat_dim, 3, seed);
    let data = build_dataset(&g, &enumerate_pairs(&g)).expect("non-negative features");
    (g, data)
}

//! Seeded synthetic graphs for tests, benchmarks and ablations.

use std::collections::HashSet;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId};

fn one_hot(classes: &[usize], k: usize) -> Array2<f64> {
    Array2::from_shape_fn((classes.len(), k), |(i, j)| (classes[i] == j) as u8 as f64)
}

/// Undirected simple graph with `n_edges` uniform random edges, uniform
/// `[0, 1)` features and uniform one-hot labels.
pub fn random_graph(n_nodes: usize, n_edges: usize, feat_dim: usize, n_classes: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n_nodes * n_nodes.saturating_sub(1) / 2;
    let target = n_edges.min(max_edges);
    let mut seen = HashSet::with_capacity(target);
    let mut edges = Vec::with_capacity(target);
    while edges.len() < target {
        let u = rng.random_range(0..n_nodes);
        let v = rng.random_range(0..n_nodes);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    let features = Array2::from_shape_fn((n_nodes, feat_dim), |_| rng.random::<f64>());
    let classes: Vec<usize> = (0..n_nodes).map(|_| rng.random_range(0..n_classes.max(1))).collect();
    Graph::new(
        n_nodes,
        edges,
        features,
        Some(one_hot(&classes, n_classes.max(1))),
        None,
        false,
    )
    .expect("generated graph is valid")
}

/// Settings for [`planted_heterophily`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterophilyConfig {
    pub n_nodes: usize,
    pub n_classes: usize,
    pub avg_degree: f64,
    /// Probability that an edge joins two nodes of the same class.
    pub same_class_prob: f64,
    pub feat_dim: usize,
    /// Extra mass on a node's class-specific feature block.
    pub signal: f64,
}

impl Default for HeterophilyConfig {
    fn default() -> Self {
        HeterophilyConfig {
            n_nodes: 600,
            n_classes: 4,
            avg_degree: 6.0,
            same_class_prob: 0.05,
            feat_dim: 24,
            signal: 0.6,
        }
    }
}

/// Labels planted with low assortativity: edges mostly join nodes of
/// different classes, chosen uniformly among the other classes, so a node's
/// neighborhood carries little information about its own label. Features
/// are uniform noise plus `signal` on the block of columns owned by the
/// node's class.
pub fn planted_heterophily(cfg: &HeterophilyConfig, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = cfg.n_classes.max(2);
    let n = cfg.n_nodes;
    let classes: Vec<usize> = (0..n).map(|i| i % k).collect();
    let mut by_class: Vec<Vec<NodeId>> = vec![Vec::new(); k];
    for (i, &c) in classes.iter().enumerate() {
        by_class[c].push(i);
    }
    let n_edges = (cfg.avg_degree * n as f64 / 2.0).round() as usize;
    let mut seen = HashSet::with_capacity(n_edges);
    let mut edges = Vec::with_capacity(n_edges);
    let mut attempts = 0usize;
    while edges.len() < n_edges && attempts < 100 * n_edges + 1000 {
        attempts += 1;
        let u = rng.random_range(0..n);
        let cu = classes[u];
        let cv = if rng.random::<f64>() < cfg.same_class_prob {
            cu
        } else {
            (cu + rng.random_range(1..k)) % k
        };
        let pool = &by_class[cv];
        let v = pool[rng.random_range(0..pool.len())];
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    let block = (cfg.feat_dim / k).max(1);
    let features = Array2::from_shape_fn((n, cfg.feat_dim), |(i, j)| {
        let own = j / block == classes[i];
        rng.random::<f64>() + if own { cfg.signal } else { 0.0 }
    });
    Graph::new(n, edges, features, Some(one_hot(&classes, k)), None, false).expect("generated graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assortativity::{global_assortativity, label_columns, mixing_matrix, Scope};

    #[test]
    fn random_graph_shape_and_determinism() {
        let g = random_graph(50, 120, 6, 3, 1);
        assert_eq!(g.n_edges(), 120);
        assert_eq!(g.features().dim(), (50, 6));
        let h = random_graph(50, 120, 6, 3, 1);
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn planted_graph_is_disassortative() {
        let g = planted_heterophily(&HeterophilyConfig::default(), 3);
        let col = &label_columns(g.node_labels().unwrap())[0];
        let r = global_assortativity(&mixing_matrix(&g, col, Scope::Node, None).unwrap()).unwrap();
        assert!(r < -0.1, "{r}");
    }
}

#![allow(dead_code)]

use ndarray::{Array1, Array2};
use paire::Graph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw edge list plus features, before `Graph::new` normalizes it.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub features: Array2<f64>,
    pub classes: Vec<usize>,
    pub n_classes: usize,
    pub directed: bool,
}

impl RawGraph {
    pub fn build(&self) -> Graph {
        let labels = Array2::from_shape_fn((self.n, self.n_classes), |(i, j)| (self.classes[i] == j) as u8 as f64);
        Graph::new(self.n, self.edges.clone(), self.features.clone(), Some(labels), None, self.directed).unwrap()
    }
}

pub fn raw_graph(max_nodes: usize, max_classes: usize) -> impl Strategy<Value = RawGraph> {
    (2..=max_nodes, 1..=max_classes, 1usize..4, any::<bool>()).prop_flat_map(move |(n, k, d, directed)| {
        (
            prop::collection::vec((0..n, 0..n), 0..3 * n),
            prop::collection::vec(0.0f64..5.0, n * d),
            prop::collection::vec(0..k, n),
        )
            .prop_map(move |(edges, feats, classes)| RawGraph {
                n,
                edges,
                features: Array2::from_shape_vec((n, d), feats).unwrap(),
                classes,
                n_classes: k,
                directed,
            })
    })
}

/// Seeded random graph for fixed-size oracle checks.
pub fn seeded_graph(n: usize, n_edges: usize, d: usize, k: usize, directed: bool, seed: u64) -> RawGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n_edges).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
    let features = Array2::from_shape_fn((n, d), |_| rng.random_range(0.0..3.0));
    let classes = (0..n).map(|_| rng.random_range(0..k)).collect();
    RawGraph { n, edges, features, classes, n_classes: k, directed }
}

/// Neighbor sets by scanning the deduplicated edge list.
pub fn scan_neighbors(g: &Graph, u: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        if a == b {
            continue;
        }
        if a == u {
            out.push(b);
        }
        if !g.is_directed() && b == u {
            out.push(a);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().map(|x| x + 1e-8).sum();
    v.iter().map(|x| (x + 1e-8) / s).collect()
}

pub fn random_distribution(rng: &mut ChaCha8Rng, f: usize) -> Array1<f64> {
    let raw: Vec<f64> = (0..f).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

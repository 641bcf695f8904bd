//! Graph storage, ordered pair enumeration and neighborhoods.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use log::warn;
use ndarray::{Array2, Axis};

use crate::error::{Error, Result};
use crate::textio;

pub type NodeId = usize;
pub type PairId = usize;

/// Binary label matrix, one row per node or edge.
pub type LabelMatrix = Array2<u8>;

/// Immutable attributed graph.
///
/// Edges are stored once, in input order, after duplicate removal. For
/// undirected graphs `(u, v)` and `(v, u)` count as the same edge.
/// Self-loops stay in the edge list but never appear in a neighborhood.
#[derive(Debug, Clone)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(NodeId, NodeId)>,
    features: Array2<f64>,
    node_labels: Option<LabelMatrix>,
    edge_labels: Option<LabelMatrix>,
    directed: bool,
    adjacency: Vec<Vec<NodeId>>,
    node_names: Option<Vec<String>>,
}

impl Graph {
    /// Validates the parts and builds the adjacency index.
    pub fn new(
        n_nodes: usize,
        edges: Vec<(NodeId, NodeId)>,
        features: Array2<f64>,
        node_labels: Option<Array2<f64>>,
        edge_labels: Option<Array2<f64>>,
        directed: bool,
    ) -> Result<Self> {
        if features.nrows() != n_nodes {
            return Err(Error::RowCountMismatch {
                what: "features",
                expected: n_nodes,
                found: features.nrows(),
            });
        }
        if features.ncols() == 0 {
            return Err(Error::Shape("feature dimension must be at least 1".into()));
        }
        for &(u, v) in &edges {
            for id in [u, v] {
                if id >= n_nodes {
                    return Err(Error::NodeOutOfRange { id, n_nodes });
                }
            }
        }
        let node_labels = node_labels
            .map(|m| to_binary("node labels", m, n_nodes))
            .transpose()?;
        let edge_labels = edge_labels
            .map(|m| to_binary("edge labels", m, edges.len()))
            .transpose()?;

        let (edges, edge_labels) = dedup_edges(edges, edge_labels, directed);

        let mut adjacency = vec![Vec::new(); n_nodes];
        for &(u, v) in &edges {
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            if !directed {
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }

        Ok(Graph {
            n_nodes,
            edges,
            features,
            node_labels,
            edge_labels,
            directed,
            adjacency,
            node_names: None,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn feature_dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn node_labels(&self) -> Option<&LabelMatrix> {
        self.node_labels.as_ref()
    }

    pub fn edge_labels(&self) -> Option<&LabelMatrix> {
        self.edge_labels.as_ref()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// String ids from the edge file, indexed by dense node id.
    pub fn node_names(&self) -> Option<&[String]> {
        self.node_names.as_deref()
    }

    /// `N(u)`: out-neighbors for directed graphs, all adjacent nodes for
    /// undirected ones. Ascending, never contains `u`.
    pub fn neighbors(&self, u: NodeId) -> Result<&[NodeId]> {
        self.adjacency
            .get(u)
            .map(Vec::as_slice)
            .ok_or(Error::NodeOutOfRange {
                id: u,
                n_nodes: self.n_nodes,
            })
    }

    pub(crate) fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        match self.adjacency.get(u) {
            Some(list) => list.binary_search(&v).is_ok(),
            None => false,
        }
    }

    /// Copy of this graph keeping only the edges for which `keep` is true.
    /// Edge labels follow their edges.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, (NodeId, NodeId)) -> bool) -> Graph {
        let kept: Vec<usize> = (0..self.edges.len())
            .filter(|&i| keep(i, self.edges[i]))
            .collect();
        let edges = kept.iter().map(|&i| self.edges[i]).collect();
        let edge_labels = self
            .edge_labels
            .as_ref()
            .map(|m| m.select(Axis(0), &kept).mapv(f64::from));
        let mut g = Graph::new(
            self.n_nodes,
            edges,
            self.features.clone(),
            self.node_labels.as_ref().map(|m| m.mapv(f64::from)),
            edge_labels,
            self.directed,
        )
        .expect("subgraph of a valid graph is valid");
        g.node_names = self.node_names.clone();
        g
    }

    /// Shifts every feature column by its minimum so all values become
    /// non-negative.
    pub fn shift_nonneg(&self) -> Graph {
        let mut g = self.clone();
        for mut col in g.features.columns_mut() {
            let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
            if min.is_finite() {
                col.mapv_inplace(|x| x - min);
            }
        }
        g
    }
}

fn to_binary(what: &'static str, m: Array2<f64>, rows: usize) -> Result<LabelMatrix> {
    if m.nrows() != rows {
        return Err(Error::RowCountMismatch {
            what,
            expected: rows,
            found: m.nrows(),
        });
    }
    for ((row, _), &value) in m.indexed_iter() {
        if value != 0.0 && value != 1.0 {
            return Err(Error::NonBinaryLabel { what, row, value });
        }
    }
    Ok(m.mapv(|x| x as u8))
}

fn dedup_edges(
    edges: Vec<(NodeId, NodeId)>,
    labels: Option<LabelMatrix>,
    directed: bool,
) -> (Vec<(NodeId, NodeId)>, Option<LabelMatrix>) {
    let mut seen = HashSet::with_capacity(edges.len());
    let mut kept = Vec::with_capacity(edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let key = if directed || u <= v { (u, v) } else { (v, u) };
        if seen.insert(key) {
            kept.push(i);
        }
    }
    if kept.len() == edges.len() {
        return (edges, labels);
    }
    warn!(
        "dropped {} duplicate edge(s); first occurrence kept",
        edges.len() - kept.len()
    );
    let edges = kept.iter().map(|&i| edges[i]).collect();
    let labels = labels.map(|m| m.select(Axis(0), &kept));
    (edges, labels)
}

/// Input files for [`load_graph`].
#[derive(Debug, Clone, Copy)]
pub struct GraphPaths<'a> {
    pub edges: &'a Path,
    pub features: &'a Path,
    pub node_labels: Option<&'a Path>,
    pub edge_labels: Option<&'a Path>,
}

/// Loads and validates a graph from the text formats.
///
/// The node count comes from the feature file; nodes without edges are kept
/// as isolated nodes. Edge-label rows follow edge-list line order.
pub fn load_graph(paths: GraphPaths<'_>, directed: bool) -> Result<Graph> {
    let raw = textio::read_edge_list(paths.edges)?;
    let features = textio::read_matrix(paths.features)?;
    let n_nodes = features.nrows();

    if let Some(names) = &raw.names {
        if names.len() > n_nodes {
            return Err(Error::RowCountMismatch {
                what: "features (one row per named node)",
                expected: names.len(),
                found: n_nodes,
            });
        }
    }
    for (&(u, v), &line) in raw.edges.iter().zip(&raw.lines) {
        if u >= n_nodes || v >= n_nodes {
            return Err(Error::Parse {
                path: paths.edges.to_path_buf(),
                line,
                msg: format!(
                    "endpoint {} out of range (features declare {n_nodes} nodes)",
                    u.max(v)
                ),
            });
        }
    }

    let node_labels = paths.node_labels.map(textio::read_matrix).transpose()?;
    let edge_labels = paths.edge_labels.map(textio::read_matrix).transpose()?;
    let mut g = Graph::new(
        n_nodes,
        raw.edges,
        features,
        node_labels,
        edge_labels,
        directed,
    )?;
    g.node_names = raw.names;
    Ok(g)
}

/// The ordered pairs `P(G)` with lookup tables.
#[derive(Debug, Clone)]
pub struct PairSet {
    pairs: Vec<(NodeId, NodeId)>,
    index: HashMap<(NodeId, NodeId), PairId>,
    out_pairs: Vec<Vec<PairId>>,
    edge_of_pair: Vec<usize>,
}

impl PairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn get(&self, id: PairId) -> (NodeId, NodeId) {
        self.pairs[id]
    }

    pub fn id_of(&self, u: NodeId, v: NodeId) -> Option<PairId> {
        self.index.get(&(u, v)).copied()
    }

    /// Pairs whose source is `u`, in enumeration order.
    pub fn out_pairs(&self, u: NodeId) -> &[PairId] {
        self.out_pairs.get(u).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Index (into [`Graph::edges`]) of the edge a pair was expanded from.
    pub fn edge_of(&self, id: PairId) -> usize {
        self.edge_of_pair[id]
    }

    pub fn n_nodes(&self) -> usize {
        self.out_pairs.len()
    }
}

/// Enumerates `P(G)`.
///
/// Directed graphs give one pair per edge; undirected graphs give `(u, v)`
/// followed by `(v, u)` for every edge. Self-loops produce no pair.
pub fn enumerate_pairs(g: &Graph) -> PairSet {
    let per_edge = if g.directed { 1 } else { 2 };
    let cap = g.edges.len() * per_edge;
    let mut pairs = Vec::with_capacity(cap);
    let mut edge_of_pair = Vec::with_capacity(cap);
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if u == v {
            continue;
        }
        pairs.push((u, v));
        edge_of_pair.push(i);
        if !g.directed {
            pairs.push((v, u));
            edge_of_pair.push(i);
        }
    }
    let index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut out_pairs = vec![Vec::new(); g.n_nodes];
    for (i, &(u, _)) in pairs.iter().enumerate() {
        out_pairs[u].push(i);
    }
    PairSet {
        pairs,
        index,
        out_pairs,
        edge_of_pair,
    }
}

/// One-hop pair neighborhood: pairs leaving `u` or `v` toward their
/// neighbors, without `p` itself and its reverse.
pub fn pair_neighborhood(
    g: &Graph,
    ps: &PairSet,
    (u, v): (NodeId, NodeId),
) -> Result<Vec<PairId>> {
    if ps.id_of(u, v).is_none() {
        return Err(Error::UnknownPair(u, v));
    }
    let mut out = Vec::new();
    for (src, other) in [(u, v), (v, u)] {
        for &w in g.neighbors(src)? {
            if w == other {
                continue;
            }
            if let Some(id) = ps.id_of(src, w) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

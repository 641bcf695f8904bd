//! Global (mixing-matrix) and local label assortativity for nodes and edges.
//!
//! Node-level statistics count ordered pairs `(u, v)` with `v ∈ N(u)`.
//! Edge-level statistics treat two distinct edges as neighbors when they
//! share an endpoint (line-graph adjacency).
//!
//! Label matrices whose rows are all one-hot are read as a single
//! categorical label; anything else is split into one two-class problem per
//! column.

use std::fmt::Write as _;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMatrix, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Node,
    Edge,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::Node => "node",
            Scope::Edge => "edge",
        }
    }

    /// Which neighborhood the statistics were computed over.
    pub fn neighborhood(self) -> &'static str {
        match self {
            Scope::Node => "ordered_node_pairs",
            Scope::Edge => "line_graph_shared_endpoint",
        }
    }
}

/// One categorical labeling of all nodes or all edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelColumn {
    pub name: String,
    pub values: Vec<usize>,
    pub n_classes: usize,
}

/// Splits a binary label matrix into categorical columns.
pub fn label_columns(m: &LabelMatrix) -> Vec<LabelColumn> {
    let one_hot = m.nrows() > 0 && m.rows().into_iter().all(|r| r.iter().filter(|&&x| x == 1).count() == 1);
    if one_hot {
        let values = m
            .rows()
            .into_iter()
            .map(|r| r.iter().position(|&x| x == 1).expect("one-hot row"))
            .collect();
        return vec![LabelColumn {
            name: "class".into(),
            values,
            n_classes: m.ncols(),
        }];
    }
    m.columns()
        .into_iter()
        .enumerate()
        .map(|(j, c)| LabelColumn {
            name: format!("dim{j}"),
            values: c.iter().map(|&x| x as usize).collect(),
            n_classes: 2,
        })
        .collect()
}

/// `e[i][j]`: fraction of neighboring (ordered) pairs labeled `i` then `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    pub e: Array2<f64>,
}

impl MixingMatrix {
    /// Row sums `a_i`.
    pub fn a(&self) -> Array1<f64> {
        self.e.sum_axis(ndarray::Axis(1))
    }

    /// Column sums `b_i`.
    pub fn b(&self) -> Array1<f64> {
        self.e.sum_axis(ndarray::Axis(0))
    }
}

/// Line-graph adjacency: for every edge, the ascending ids of the other
/// edges that share at least one endpoint with it.
pub fn edge_neighbors(g: &Graph) -> Vec<Vec<usize>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n_nodes()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(i);
        if v != u {
            incident[v].push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n_edges()];
    for inc in &incident {
        for &e in inc {
            adj[e].extend(inc.iter().copied().filter(|&f| f != e));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn check_len(col: &LabelColumn, expected: usize, what: &'static str) -> Result<()> {
    if col.values.len() != expected {
        return Err(Error::RowCountMismatch {
            what,
            expected,
            found: col.values.len(),
        });
    }
    Ok(())
}

/// Mixing matrix of one label column. For edge scope pass the output of
/// [`edge_neighbors`]; node scope uses the graph's neighborhoods.
pub fn mixing_matrix(
    g: &Graph,
    col: &LabelColumn,
    scope: Scope,
    edge_adj: Option<&[Vec<usize>]>,
) -> Result<MixingMatrix> {
    let k = col.n_classes;
    let mut counts = Array2::<f64>::zeros((k, k));
    let mut total = 0usize;
    let owned;
    let adj: &[Vec<usize>] = match scope {
        Scope::Node => {
            check_len(col, g.n_nodes(), "node labels")?;
            g.adjacency()
        }
        Scope::Edge => {
            check_len(col, g.n_edges(), "edge labels")?;
            match edge_adj {
                Some(a) => a,
                None => {
                    owned = edge_neighbors(g);
                    &owned
                }
            }
        }
    };
    for (x, nbrs) in adj.iter().enumerate() {
        let yx = col.values[x];
        for &y in nbrs {
            counts[[yx, col.values[y]]] += 1.0;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::Undefined(format!(
            "no neighboring {} pairs to build a mixing matrix",
            scope.name()
        )));
    }
    counts /= total as f64;
    Ok(MixingMatrix { e: counts })
}

/// `r = (Tr(e) − Σ a_i b_i) / (1 − Σ a_i b_i)`; undefined when all mass sits
/// in one class.
pub fn global_assortativity(m: &MixingMatrix) -> Result<f64> {
    let trace: f64 = m.e.diag().sum();
    let ab: f64 = m.a().iter().zip(m.b().iter()).map(|(a, b)| a * b).sum();
    let denom = 1.0 - ab;
    if denom.abs() < 1e-12 {
        return Err(Error::Undefined(
            "assortativity undefined: every endpoint carries the same class".into(),
        ));
    }
    Ok((trace - ab) / denom)
}

fn same_label_fraction(col: &LabelColumn, x: usize, nbrs: &[usize]) -> Option<f64> {
    if nbrs.is_empty() {
        return None;
    }
    let same = nbrs
        .iter()
        .filter(|&&y| col.values[y] == col.values[x])
        .count();
    Some(same as f64 / nbrs.len() as f64)
}

/// Fraction of `N(u)` sharing `u`'s label.
pub fn local_node_assortativity(g: &Graph, col: &LabelColumn, u: NodeId) -> Result<f64> {
    check_len(col, g.n_nodes(), "node labels")?;
    same_label_fraction(col, u, g.neighbors(u)?)
        .ok_or_else(|| Error::Undefined(format!("node {u} has no neighbors")))
}

/// Fraction of edges adjacent to `e` carrying `e`'s label.
pub fn local_edge_assortativity(
    edge_adj: &[Vec<usize>],
    col: &LabelColumn,
    e: usize,
) -> Result<f64> {
    check_len(col, edge_adj.len(), "edge labels")?;
    let nbrs = edge_adj
        .get(e)
        .ok_or_else(|| Error::Undefined(format!("edge {e} does not exist")))?;
    same_label_fraction(col, e, nbrs)
        .ok_or_else(|| Error::Undefined(format!("edge {e} has no adjacent edges")))
}

/// `a·b / (|a||b|)`; undefined for a zero vector.
pub fn cosine_similarity(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("{} vs {}", a.len(), b.len())));
    }
    let na = a.dot(&a).sqrt();
    let nb = b.dot(&b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Undefined("cosine similarity of a zero vector".into()));
    }
    Ok((a.dot(&b) / (na * nb)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    Low,
    Mid,
    High,
}

impl Stratum {
    pub fn name(self) -> &'static str {
        match self {
            Stratum::Low => "low",
            Stratum::Mid => "mid",
            Stratum::High => "high",
        }
    }
}

/// Low/mid/high split points; the default is thirds: `[0, 1/3)`,
/// `[1/3, 2/3)`, `[2/3, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrataThresholds {
    pub low_below: f64,
    pub high_from: f64,
}

impl Default for StrataThresholds {
    fn default() -> Self {
        StrataThresholds {
            low_below: 1.0 / 3.0,
            high_from: 2.0 / 3.0,
        }
    }
}

/// Bucket assignment plus bucket sizes `[low, mid, high]`.
pub fn stratify_by_local_assortativity(
    values: &[f64],
    thresholds: StrataThresholds,
) -> (Vec<Stratum>, [usize; 3]) {
    let mut counts = [0usize; 3];
    let buckets = values
        .iter()
        .map(|&v| {
            let s = if v < thresholds.low_below {
                Stratum::Low
            } else if v < thresholds.high_from {
                Stratum::Mid
            } else {
                Stratum::High
            };
            counts[s as usize] += 1;
            s
        })
        .collect();
    (buckets, counts)
}

/// Local coefficients of one label column, `None` where undefined.
#[derive(Debug, Clone)]
pub struct LocalColumn {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

impl LocalColumn {
    pub fn defined(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn excluded(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Counts over `bins` equal-width bins of `[0, 1]` (1.0 falls in the
    /// last bin).
    pub fn histogram(&self, bins: usize) -> Vec<usize> {
        let mut h = vec![0usize; bins];
        for v in self.defined() {
            let i = ((v * bins as f64) as usize).min(bins - 1);
            h[i] += 1;
        }
        h
    }
}

#[derive(Debug, Clone)]
pub struct AssortativityReport {
    pub scope: Scope,
    /// `(label, r)`; `None` when the coefficient is undefined.
    pub global: Vec<(String, Option<f64>)>,
    pub local: Vec<LocalColumn>,
}

/// Global and local assortativity for every label column of one scope.
pub fn assortativity_report(g: &Graph, scope: Scope) -> Result<AssortativityReport> {
    let labels = match scope {
        Scope::Node => g.node_labels().ok_or(Error::MissingLabels("node"))?,
        Scope::Edge => g.edge_labels().ok_or(Error::MissingLabels("edge"))?,
    };
    let cols = label_columns(labels);
    let edge_adj = match scope {
        Scope::Edge => Some(edge_neighbors(g)),
        Scope::Node => None,
    };
    let mut global = Vec::with_capacity(cols.len());
    let mut local = Vec::with_capacity(cols.len());
    for col in &cols {
        let r = mixing_matrix(g, col, scope, edge_adj.as_deref())
            .and_then(|m| global_assortativity(&m))
            .ok();
        global.push((col.name.clone(), r));
        let values = match &edge_adj {
            None => (0..g.n_nodes())
                .map(|u| same_label_fraction(col, u, &g.adjacency()[u]))
                .collect(),
            Some(adj) => (0..g.n_edges())
                .map(|e| same_label_fraction(col, e, &adj[e]))
                .collect(),
        };
        local.push(LocalColumn {
            label: col.name.clone(),
            values,
        });
    }
    Ok(AssortativityReport {
        scope,
        global,
        local,
    })
}

impl AssortativityReport {
    /// `scope,label,neighborhood,r`
    pub fn global_csv(&self) -> String {
        let mut out = String::from("scope,label,neighborhood,r\n");
        for (label, r) in &self.global {
            let r = r.map(|x| x.to_string()).unwrap_or_else(|| "undefined".into());
            let _ = writeln!(
                out,
                "{},{},{},{}",
                self.scope.name(),
                label,
                self.scope.neighborhood(),
                r
            );
        }
        out
    }

    /// `scope,label,bin_lo,bin_hi,count`, plus one `undefined` row per label
    /// with the number of excluded nodes or edges.
    pub fn histogram_csv(&self, bins: usize) -> String {
        let mut out = String::from("scope,label,bin_lo,bin_hi,count\n");
        for col in &self.local {
            for (i, c) in col.histogram(bins).iter().enumerate() {
                let lo = i as f64 / bins as f64;
                let hi = (i + 1) as f64 / bins as f64;
                let _ = writeln!(out, "{},{},{lo},{hi},{c}", self.scope.name(), col.label);
            }
            let _ = writeln!(
                out,
                "{},{},undefined,undefined,{}",
                self.scope.name(),
                col.label,
                col.excluded()
            );
        }
        out
    }

    /// Whitespace-separated `bin_center count` blocks, one per label,
    /// separated by blank lines (gnuplot `index` friendly).
    pub fn histogram_dat(&self, bins: usize) -> String {
        let mut out = String::new();
        for col in &self.local {
            let _ = writeln!(out, "# {} {}", self.scope.name(), col.label);
            for (i, c) in col.histogram(bins).iter().enumerate() {
                let center = (i as f64 + 0.5) / bins as f64;
                let _ = writeln!(out, "{center} {c}");
            }
            out.push_str("\n\n");
        }
        out
    }

    /// `scope,label,stratum,count`
    pub fn strata_csv(&self, thresholds: StrataThresholds) -> String {
        let mut out = String::from("scope,label,stratum,count\n");
        for col in &self.local {
            let (_, counts) = stratify_by_local_assortativity(&col.defined(), thresholds);
            for (s, c) in [Stratum::Low, Stratum::Mid, Stratum::High].iter().zip(counts) {
                let _ = writeln!(out, "{},{},{},{c}", self.scope.name(), col.label, s.name());
            }
        }
        out
    }
}

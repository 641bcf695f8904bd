//! Per-pair ego and aggregated feature distributions.
//!
//! Ego features concatenate the two endpoint feature vectors; aggregated
//! features concatenate the mean neighbor features of each endpoint. Both are
//! turned into probability distributions over the `F = 2d` positions so the
//! autoencoder can be trained against them with a KL loss.

use ndarray::{s, Array1, Array2, ArrayViewMut1, Axis};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, PairSet};

/// Additive floor applied before L1 normalization.
pub const DISTRIBUTION_EPS: f64 = 1e-8;

/// Ego and aggregated distributions, one row per pair (pair id order).
#[derive(Debug, Clone)]
pub struct PairFeatureTable {
    pub ego: Array2<f64>,
    pub agg: Array2<f64>,
}

impl PairFeatureTable {
    pub fn len(&self) -> usize {
        self.ego.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.ego.nrows() == 0
    }

    /// Feature width `F`.
    pub fn width(&self) -> usize {
        self.ego.ncols()
    }
}

/// `x_u ‖ x_v`.
pub fn ego_features(g: &Graph, (u, v): (NodeId, NodeId)) -> Array1<f64> {
    let x = g.features();
    let d = x.ncols();
    let mut out = Array1::zeros(2 * d);
    out.slice_mut(s![..d]).assign(&x.row(u));
    out.slice_mut(s![d..]).assign(&x.row(v));
    out
}

/// Mean feature vector over `N(u)` for every node; zero for empty
/// neighborhoods.
pub fn neighbor_means(g: &Graph) -> Array2<f64> {
    let x = g.features();
    let mut means = Array2::zeros(x.dim());
    means
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .zip(g.adjacency().par_iter())
        .for_each(|(mut row, nbrs)| {
            if nbrs.is_empty() {
                return;
            }
            for &w in nbrs {
                row += &x.row(w);
            }
            row /= nbrs.len() as f64;
        });
    means
}

/// `mean(x_i, i ∈ N(u)) ‖ mean(x_j, j ∈ N(v))`.
pub fn agg_features(g: &Graph, (u, v): (NodeId, NodeId)) -> Array1<f64> {
    let x = g.features();
    let d = x.ncols();
    let mut out = Array1::zeros(2 * d);
    for (half, node) in [(0, u), (1, v)] {
        let nbrs = &g.adjacency()[node];
        if nbrs.is_empty() {
            continue;
        }
        let mut dst = out.slice_mut(s![half * d..(half + 1) * d]);
        for &w in nbrs {
            dst += &x.row(w);
        }
        dst /= nbrs.len() as f64;
    }
    out
}

/// `(v + ε) / Σ(v + ε)`. Negative entries are rejected.
pub fn to_distribution(v: &[f64]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    normalize_in_place(ArrayViewMut1::from(&mut out[..])).map_err(|value| {
        Error::NegativeFeature { pair: None, value }
    })?;
    Ok(out)
}

fn normalize_in_place(mut row: ArrayViewMut1<'_, f64>) -> std::result::Result<(), f64> {
    if let Some(&neg) = row.iter().find(|&&x| x < 0.0 || x.is_nan()) {
        return Err(neg);
    }
    row.mapv_inplace(|x| x + DISTRIBUTION_EPS);
    let total = row.sum();
    row.mapv_inplace(|x| x / total);
    Ok(())
}

/// Builds the normalized ego and aggregated matrices for every pair.
pub fn build_dataset(g: &Graph, ps: &PairSet) -> Result<PairFeatureTable> {
    let x = g.features();
    let d = x.ncols();
    let means = neighbor_means(g);
    let n = ps.len();
    let mut ego = Array2::zeros((n, 2 * d));
    let mut agg = Array2::zeros((n, 2 * d));

    for src in [x, &means] {
        let row_min: Vec<f64> = src
            .rows()
            .into_iter()
            .map(|r| r.iter().cloned().fold(f64::INFINITY, f64::min))
            .collect();
        for (id, &(u, v)) in ps.pairs().iter().enumerate() {
            let value = row_min[u].min(row_min[v]);
            if value < 0.0 {
                return Err(Error::NegativeFeature {
                    pair: Some(id),
                    value,
                });
            }
        }
    }

    let fill = |src: &Array2<f64>, out: &mut Array2<f64>| -> Result<()> {
        out.axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .try_for_each(|(id, mut row)| {
                let (u, v) = ps.get(id);
                row.slice_mut(s![..d]).assign(&src.row(u));
                row.slice_mut(s![d..]).assign(&src.row(v));
                normalize_in_place(row).map_err(|value| Error::NegativeFeature {
                    pair: Some(id),
                    value,
                })
            })
    };
    fill(x, &mut ego)?;
    fill(&means, &mut agg)?;
    Ok(PairFeatureTable { ego, agg })
}

//! Graph in, trained pair embeddings out.

use ndarray::Array2;

use crate::error::Result;
use crate::features::build_dataset;
use crate::graph::{enumerate_pairs, Graph, PairSet};
use crate::model::{embed_pairs, train, ModelParams, TrainConfig, TrainLog};

pub struct Embedding {
    pub pairs: PairSet,
    /// One row per pair id.
    pub pair_emb: Array2<f64>,
    pub params: ModelParams,
    pub log: TrainLog,
}

pub fn embed_graph(g: &Graph, cfg: &TrainConfig) -> Result<Embedding> {
    let pairs = enumerate_pairs(g);
    let data = build_dataset(g, &pairs)?;
    let (params, log) = train(&data, cfg)?;
    let pair_emb = embed_pairs(&params, &data);
    Ok(Embedding {
        pairs,
        pair_emb,
        params,
        log,
    })
}

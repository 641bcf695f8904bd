//! Pair-level representation learning for attributed graphs.
//!
//! A graph's ordered adjacent pairs are embedded by a two-branch
//! autoencoder that reconstructs each pair's own features and its
//! neighborhood's mean features. Pair embeddings can be pooled into node
//! embeddings, scored by downstream classifiers, and compared against label
//! assortativity statistics.

pub mod assortativity;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod pipeline;
pub mod synthetic;
pub mod textio;
pub mod translate;

pub use assortativity::{
    assortativity_report, cosine_similarity, edge_neighbors, global_assortativity, label_columns,
    local_edge_assortativity, local_node_assortativity, mixing_matrix,
    stratify_by_local_assortativity, AssortativityReport, LabelColumn, LocalColumn, MixingMatrix,
    Scope, StrataThresholds, Stratum,
};
pub use error::{Error, Result};
pub use features::{
    agg_features, build_dataset, ego_features, neighbor_means, to_distribution, PairFeatureTable,
    DISTRIBUTION_EPS,
};
pub use graph::{
    enumerate_pairs, load_graph, pair_neighborhood, Graph, GraphPaths, LabelMatrix, NodeId,
    PairId, PairSet,
};
pub use model::{
    embed_pairs, forward, load_checkpoint, save_checkpoint, train, ModelParams, TrainConfig,
    TrainLog, Trainer,
};
pub use translate::{pairs_to_nodes, Translator};
pub use pipeline::{embed_graph, Embedding};
pub use ndarray;

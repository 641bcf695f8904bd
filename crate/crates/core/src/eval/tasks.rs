use std::collections::HashSet;

use log::info;
use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::logreg::{ovr_fit, ovr_predict, LogRegConfig, LogisticRegression, Standardizer};
use super::metrics::{l2_edge_operator, macro_f1, micro_f1, roc_auc};
use super::report::EvalReport;
use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMatrix, NodeId, PairSet};
use crate::model::TrainConfig;
use crate::pipeline::embed_graph;
use crate::translate::{pairs_to_nodes, Translator};

/// Random train/test splits: `train_ratio` of the instances train, the rest
/// test, repeated `n_repeats` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_ratio: f64,
    pub n_repeats: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_ratio: 0.3,
            n_repeats: 10,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return Err(Error::Config("train_ratio must lie strictly between 0 and 1".into()));
        }
        if self.n_repeats == 0 {
            return Err(Error::Config("n_repeats must be at least 1".into()));
        }
        Ok(())
    }
}

fn repeat_rng(seed: u64, repeat: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat as u64);
    rng
}

/// Disjoint `(train, test)` index sets covering `0..n`; both non-empty when
/// `n >= 2`.
pub fn split_indices(n: usize, train_ratio: f64, seed: u64, repeat: usize) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut repeat_rng(seed, repeat));
    let n_train = ((train_ratio * n as f64).round() as usize).clamp(1.min(n), n.saturating_sub(1).max(1.min(n)));
    let test = idx.split_off(n_train.min(n));
    (idx, test)
}

fn classifier_config(clf: &LogRegConfig) -> Vec<(String, String)> {
    vec![
        ("classifier".into(), "logistic_regression_ovr".into()),
        ("l2_strength".into(), clf.strength.to_string()),
        ("tolerance".into(), clf.tol.to_string()),
        ("max_iter".into(), clf.max_iter.to_string()),
    ]
}

fn classification_eval(
    task: &str,
    x: ArrayView2<'_, f64>,
    y: &LabelMatrix,
    spec: &SplitSpec,
    clf: &LogRegConfig,
) -> Result<EvalReport> {
    spec.validate()?;
    if x.nrows() != y.nrows() {
        return Err(Error::RowCountMismatch {
            what: "labels",
            expected: x.nrows(),
            found: y.nrows(),
        });
    }
    if x.nrows() < 2 {
        return Err(Error::Empty("need at least two labeled instances"));
    }
    let runs = (0..spec.n_repeats)
        .into_par_iter()
        .map(|r| {
            let (train, test) = split_indices(x.nrows(), spec.train_ratio, spec.seed, r);
            let model = ovr_fit(x.select(Axis(0), &train).view(), &y.select(Axis(0), &train), clf)?;
            let pred = ovr_predict(&model, x.select(Axis(0), &test).view());
            let truth = y.select(Axis(0), &test);
            let flags: Vec<String> = model
                .degenerate_columns()
                .into_iter()
                .map(|j| format!("repeat {r}: label column {j} had a single class in training"))
                .chain(
                    model
                        .models
                        .iter()
                        .enumerate()
                        .filter(|(_, m)| !m.degenerate && !m.converged)
                        .map(|(j, _)| format!("repeat {r}: label column {j} hit max_iter")),
                )
                .collect();
            let values = vec![micro_f1(truth.view(), pred.view())?, macro_f1(truth.view(), pred.view())?];
            Ok((values, flags))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut config = vec![
        ("train_ratio".to_string(), spec.train_ratio.to_string()),
        ("n_repeats".into(), spec.n_repeats.to_string()),
        ("seed".into(), spec.seed.to_string()),
        ("instances".into(), x.nrows().to_string()),
        ("label_columns".into(), y.ncols().to_string()),
    ];
    config.extend(classifier_config(clf));
    let (values, flags): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    Ok(EvalReport {
        task: task.to_string(),
        ratio: spec.train_ratio,
        seed: spec.seed,
        metrics: vec!["micro_f1".into(), "macro_f1".into()],
        values,
        flags: flags.into_iter().flatten().collect(),
        config,
    })
}

/// Node classification from node embeddings (one row per node).
pub fn node_classification_eval(
    ne: ArrayView2<'_, f64>,
    labels: &LabelMatrix,
    spec: &SplitSpec,
    clf: &LogRegConfig,
) -> Result<EvalReport> {
    classification_eval("node", ne, labels, spec, clf)
}

/// Edge classification straight from pair embeddings. Each edge is
/// represented by one pair: `(u, v)` with `u < v` for undirected graphs, the
/// edge's own orientation for directed ones. Self-loops have no pair and are
/// skipped (and flagged).
pub fn edge_classification_eval(
    pair_emb: ArrayView2<'_, f64>,
    ps: &PairSet,
    g: &Graph,
    spec: &SplitSpec,
    clf: &LogRegConfig,
) -> Result<EvalReport> {
    let labels = g.edge_labels().ok_or(Error::MissingLabels("edge"))?;
    if pair_emb.nrows() != ps.len() {
        return Err(Error::RowCountMismatch {
            what: "pair embeddings",
            expected: ps.len(),
            found: pair_emb.nrows(),
        });
    }
    let mut rows = Vec::with_capacity(g.n_edges());
    let mut kept = Vec::with_capacity(g.n_edges());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            continue;
        }
        let key = if g.is_directed() { (u, v) } else { (u.min(v), u.max(v)) };
        let id = ps.id_of(key.0, key.1).ok_or(Error::UnknownPair(key.0, key.1))?;
        rows.push(id);
        kept.push(i);
    }
    let skipped = g.n_edges() - kept.len();
    let x = pair_emb.select(Axis(0), &rows);
    let y = labels.select(Axis(0), &kept);
    let mut report = classification_eval("edge", x.view(), &y, spec, clf)?;
    if skipped > 0 {
        report.flags.insert(0, format!("{skipped} self-loop edges skipped"));
    }
    report.config.push(("edge_representation".into(), "pair_embedding_canonical".into()));
    Ok(report)
}

/// Edge holdout for link prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    pub holdout: f64,
    pub n_repeats: usize,
    pub seed: u64,
}

impl Default for LinkSpec {
    fn default() -> Self {
        LinkSpec {
            holdout: 0.15,
            n_repeats: 10,
            seed: 0,
        }
    }
}

/// One link-prediction split. Node pairs are canonical `(min, max)` for
/// undirected graphs.
#[derive(Debug, Clone)]
pub struct LinkSplit {
    pub residual: Graph,
    pub train_pos: Vec<(NodeId, NodeId)>,
    pub train_neg: Vec<(NodeId, NodeId)>,
    pub test_pos: Vec<(NodeId, NodeId)>,
    pub test_neg: Vec<(NodeId, NodeId)>,
}

fn sample_non_edges(
    g: &Graph,
    wanted: usize,
    exclude: &HashSet<(NodeId, NodeId)>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(NodeId, NodeId)>> {
    let n = g.n_nodes();
    let canon = |u: NodeId, v: NodeId| if g.is_directed() { (u, v) } else { (u.min(v), u.max(v)) };
    let total = if g.is_directed() { n * n.saturating_sub(1) } else { n * n.saturating_sub(1) / 2 };
    let n_edges = g.edges().iter().filter(|(u, v)| u != v).count();
    let available = total.saturating_sub(n_edges).saturating_sub(exclude.len());
    if wanted > available {
        return Err(Error::NegativeSampling { wanted, available });
    }
    let mut chosen = Vec::with_capacity(wanted);
    let mut seen = HashSet::with_capacity(wanted);
    if wanted * 2 > available {
        // dense: enumerate every candidate
        let mut all = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u == v || (!g.is_directed() && v < u) {
                    continue;
                }
                if !g.has_edge(u, v) && !exclude.contains(&(u, v)) {
                    all.push((u, v));
                }
            }
        }
        all.shuffle(rng);
        all.truncate(wanted);
        return Ok(all);
    }
    while chosen.len() < wanted {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || g.has_edge(u, v) || (!g.is_directed() && g.has_edge(v, u)) {
            continue;
        }
        let key = canon(u, v);
        if exclude.contains(&key) || !seen.insert(key) {
            continue;
        }
        chosen.push(key);
    }
    Ok(chosen)
}

/// Removes `holdout` of the (non-loop) edges as test positives, then draws
/// as many test non-edges and, separately, as many train non-edges as there
/// are residual edges. No sampled non-edge is in `E`.
pub fn link_split(g: &Graph, holdout: f64, seed: u64, repeat: usize) -> Result<LinkSplit> {
    if !(holdout > 0.0 && holdout < 1.0) {
        return Err(Error::Config("holdout must lie strictly between 0 and 1".into()));
    }
    let mut rng = repeat_rng(seed, repeat);
    let canon = |(u, v): (NodeId, NodeId)| if g.is_directed() { (u, v) } else { (u.min(v), u.max(v)) };
    let mut candidates: Vec<usize> = (0..g.n_edges()).filter(|&i| g.edges()[i].0 != g.edges()[i].1).collect();
    if candidates.len() < 2 {
        return Err(Error::Empty("link prediction needs at least two edges"));
    }
    candidates.shuffle(&mut rng);
    let n_test = ((holdout * candidates.len() as f64).round() as usize).clamp(1, candidates.len() - 1);
    let mut removed = vec![false; g.n_edges()];
    for &i in &candidates[..n_test] {
        removed[i] = true;
    }
    let test_pos: Vec<_> = candidates[..n_test].iter().map(|&i| canon(g.edges()[i])).collect();
    let residual = g.filter_edges(|i, _| !removed[i]);
    let train_pos: Vec<_> = residual
        .edges()
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&e| canon(e))
        .collect();
    let test_neg = sample_non_edges(g, n_test, &HashSet::new(), &mut rng)?;
    let exclude: HashSet<_> = test_neg.iter().copied().collect();
    let train_neg = sample_non_edges(g, train_pos.len(), &exclude, &mut rng)?;
    Ok(LinkSplit {
        residual,
        train_pos,
        train_neg,
        test_pos,
        test_neg,
    })
}

fn edge_feature_rows(ne: &Array2<f64>, pairs: &[(NodeId, NodeId)]) -> Result<Array2<f64>> {
    let mut x = Array2::zeros((pairs.len(), ne.ncols()));
    for (mut row, &(u, v)) in x.rows_mut().into_iter().zip(pairs) {
        row.assign(&l2_edge_operator(ne.row(u), ne.row(v))?);
    }
    Ok(x)
}

/// Link prediction: train on the residual graph, sum-translate to node
/// embeddings, score node pairs with a logistic model over the L2 edge
/// operator. Reports test ROC-AUC and, as a control, the AUC of the same
/// pipeline fit on shuffled training labels.
pub fn link_prediction_eval(
    g: &Graph,
    train_cfg: &TrainConfig,
    spec: &LinkSpec,
    clf: &LogRegConfig,
) -> Result<EvalReport> {
    if spec.n_repeats == 0 {
        return Err(Error::Config("n_repeats must be at least 1".into()));
    }
    train_cfg.validate()?;
    let mut values = Vec::with_capacity(spec.n_repeats);
    let mut flags = Vec::new();
    for r in 0..spec.n_repeats {
        let split = link_split(g, spec.holdout, spec.seed, r)?;
        let cfg = TrainConfig {
            seed: train_cfg.seed.wrapping_add(r as u64),
            ..train_cfg.clone()
        };
        let emb = embed_graph(&split.residual, &cfg)?;
        let ne = pairs_to_nodes(emb.pair_emb.view(), &emb.pairs, Translator::Sum)?;

        let train_pairs: Vec<_> = split.train_pos.iter().chain(&split.train_neg).copied().collect();
        let test_pairs: Vec<_> = split.test_pos.iter().chain(&split.test_neg).copied().collect();
        let mut y_train: Vec<bool> = (0..train_pairs.len()).map(|i| i < split.train_pos.len()).collect();
        let y_test: Vec<bool> = (0..test_pairs.len()).map(|i| i < split.test_pos.len()).collect();
        let x_train_raw = edge_feature_rows(&ne, &train_pairs)?;
        let st = Standardizer::fit(x_train_raw.view());
        let x_train = st.transform(x_train_raw.view());
        let x_test = st.transform(edge_feature_rows(&ne, &test_pairs)?.view());

        let model = LogisticRegression::fit(x_train.view(), &y_train, clf)?;
        if !model.converged {
            flags.push(format!("repeat {r}: classifier hit max_iter"));
        }
        let auc = roc_auc(model.decision_function(x_test.view()).as_slice().unwrap(), &y_test)?;

        y_train.shuffle(&mut repeat_rng(spec.seed ^ 0x5eed, r));
        let control = LogisticRegression::fit(x_train.view(), &y_train, clf)?;
        let auc_control = roc_auc(control.decision_function(x_test.view()).as_slice().unwrap(), &y_test)?;
        info!("link repeat {r}: auc {auc:.4}, shuffled control {auc_control:.4}");
        values.push(vec![auc, auc_control]);
    }
    let mut config = vec![
        ("holdout".to_string(), spec.holdout.to_string()),
        ("n_repeats".into(), spec.n_repeats.to_string()),
        ("seed".into(), spec.seed.to_string()),
        ("train_seed_base".into(), train_cfg.seed.to_string()),
        ("translator".into(), "sum".into()),
        ("edge_operator".into(), "l2".into()),
    ];
    config.extend(classifier_config(clf));
    Ok(EvalReport {
        task: "link".into(),
        ratio: 1.0 - spec.holdout,
        seed: spec.seed,
        metrics: vec!["roc_auc".into(), "roc_auc_shuffled_control".into()],
        values,
        flags,
        config,
    })
}

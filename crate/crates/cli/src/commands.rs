use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use log::info;
use paire::ndarray::Array2;
use paire::eval::{
    edge_classification_eval, link_prediction_eval, node_classification_eval, EvalReport, LinkSpec,
    SplitSpec,
};
use paire::textio::{read_matrix, write_matrix};
use paire::{
    assortativity_report, embed_graph, enumerate_pairs, load_graph, pairs_to_nodes, save_checkpoint,
    Graph, GraphPaths, LabelMatrix, PairSet, Scope,
};

use crate::config::RunConfig;

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Creates the output directory and echoes the resolved config into it.
pub fn prepare(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    write(&cfg.out.join("config.resolved"), cfg.to_text())
}

pub fn load(cfg: &RunConfig) -> Result<Graph> {
    let edges = cfg.edges.as_deref().ok_or_else(|| anyhow!("`edges` is required"))?;
    let features = cfg.features.as_deref().ok_or_else(|| anyhow!("`features` is required"))?;
    let g = load_graph(
        GraphPaths {
            edges,
            features,
            node_labels: cfg.node_labels.as_deref(),
            edge_labels: cfg.edge_labels.as_deref(),
        },
        cfg.directed,
    )?;
    info!(
        "loaded graph: {} nodes, {} edges, {} features",
        g.n_nodes(),
        g.n_edges(),
        g.feature_dim()
    );
    Ok(if cfg.shift_nonneg { g.shift_nonneg() } else { g })
}

/// Pair embeddings for `g`: read from `pair_embeddings` when given,
/// otherwise trained and written to the output directory.
pub fn pair_embeddings(cfg: &RunConfig, g: &Graph) -> Result<(PairSet, Array2<f64>)> {
    if let Some(p) = &cfg.pair_embeddings {
        let ps = enumerate_pairs(g);
        let pe = read_matrix(p)?;
        if pe.nrows() != ps.len() {
            return Err(anyhow!(
                "{} has {} rows but the graph has {} pairs",
                p.display(),
                pe.nrows(),
                ps.len()
            ));
        }
        return Ok((ps, pe));
    }
    let emb = embed_graph(g, &cfg.train)?;
    write_matrix(&cfg.out.join("pair_embeddings.txt"), emb.pair_emb.view())?;
    let mut pairs = String::from("# pair\tsrc\tdst\n");
    for (id, (u, v)) in emb.pairs.pairs().iter().enumerate() {
        pairs.push_str(&format!("{id}\t{u}\t{v}\n"));
    }
    write(&cfg.out.join("pairs.tsv"), pairs)?;
    if let Some(names) = g.node_names() {
        write(&cfg.out.join("nodes.tsv"), names.iter().enumerate().map(|(i, n)| format!("{i}\t{n}\n")).collect::<String>())?;
    }
    save_checkpoint(&cfg.out.join("checkpoint.paire"), &cfg.train, &emb.params)?;
    write(&cfg.out.join("train_log.csv"), emb.log.to_csv())?;
    if let Some(last) = emb.log.epochs.last() {
        info!("trained {} epochs, final loss {:.6}", emb.log.epochs.len(), last.loss_total);
    }
    Ok((emb.pairs, emb.pair_emb))
}

pub fn embed(cfg: &RunConfig) -> Result<PathBuf> {
    prepare(cfg)?;
    let g = load(cfg)?;
    let mut cfg = cfg.clone();
    cfg.pair_embeddings = None;
    pair_embeddings(&cfg, &g)?;
    Ok(cfg.out.join("pair_embeddings.txt"))
}

fn node_embeddings(cfg: &RunConfig, g: &Graph) -> Result<Array2<f64>> {
    if let Some(p) = &cfg.node_embeddings {
        let ne = read_matrix(p)?;
        if ne.nrows() != g.n_nodes() {
            return Err(anyhow!("{} has {} rows for {} nodes", p.display(), ne.nrows(), g.n_nodes()));
        }
        return Ok(ne);
    }
    let (ps, pe) = pair_embeddings(cfg, g)?;
    let ne = pairs_to_nodes(pe.view(), &ps, cfg.translator)?;
    write_matrix(&cfg.out.join("node_embeddings.txt"), ne.view())?;
    Ok(ne)
}

pub fn translate(cfg: &RunConfig) -> Result<PathBuf> {
    prepare(cfg)?;
    let g = load(cfg)?;
    let mut cfg = cfg.clone();
    cfg.node_embeddings = None;
    node_embeddings(&cfg, &g)?;
    Ok(cfg.out.join("node_embeddings.txt"))
}

pub fn assort(cfg: &RunConfig) -> Result<Vec<String>> {
    prepare(cfg)?;
    let g = load(cfg)?;
    let mut lines = Vec::new();
    let scopes = [
        (Scope::Node, g.node_labels().is_some()),
        (Scope::Edge, g.edge_labels().is_some()),
    ];
    if scopes.iter().all(|(_, has)| !has) {
        return Err(anyhow!("assort needs node_labels or edge_labels"));
    }
    for (scope, has) in scopes {
        if !has {
            continue;
        }
        let rep = assortativity_report(&g, scope)?;
        let name = scope.name();
        write(&cfg.out.join(format!("assort_{name}_global.csv")), rep.global_csv())?;
        write(&cfg.out.join(format!("assort_{name}_hist.csv")), rep.histogram_csv(cfg.histogram_bins))?;
        write(&cfg.out.join(format!("assort_{name}_hist.dat")), rep.histogram_dat(cfg.histogram_bins))?;
        write(&cfg.out.join(format!("assort_{name}_strata.csv")), rep.strata_csv(cfg.strata))?;
        for (label, r) in &rep.global {
            let r = r.map(|x| format!("{x:.4}")).unwrap_or_else(|| "undefined".into());
            lines.push(format!("{name} {label}: r = {r}"));
        }
    }
    Ok(lines)
}

pub fn write_report(cfg: &RunConfig, report: &EvalReport) -> Result<()> {
    let task = &report.task;
    write(&cfg.out.join(format!("eval_{task}_raw.csv")), report.raw_csv())?;
    write(&cfg.out.join(format!("eval_{task}_summary.csv")), report.summary_csv())?;
    let mut config = report.config_csv();
    for line in cfg.to_text().lines().filter(|l| !l.starts_with('#')) {
        if let Some((k, v)) = line.split_once(" = ") {
            config.push_str(&format!("run.{k},{v}\n"));
        }
    }
    write(&cfg.out.join(format!("eval_{task}_config.csv")), config)
}

fn split_spec(cfg: &RunConfig) -> SplitSpec {
    SplitSpec {
        train_ratio: cfg.train_ratio,
        n_repeats: cfg.n_repeats,
        seed: cfg.train.seed,
    }
}

fn labels<'a>(m: Option<&'a LabelMatrix>, what: &str) -> Result<&'a LabelMatrix> {
    m.ok_or_else(|| anyhow!("{what} labels are required"))
}

pub fn eval_node(cfg: &RunConfig) -> Result<EvalReport> {
    prepare(cfg)?;
    let g = load(cfg)?;
    let y = labels(g.node_labels(), "node")?;
    let ne = node_embeddings(cfg, &g)?;
    let mut report = node_classification_eval(ne.view(), y, &split_spec(cfg), &cfg.classifier)?;
    report.config.push(("translator".into(), cfg.translator.to_string()));
    write_report(cfg, &report)?;
    Ok(report)
}

pub fn eval_edge(cfg: &RunConfig) -> Result<EvalReport> {
    prepare(cfg)?;
    let g = load(cfg)?;
    labels(g.edge_labels(), "edge")?;
    let (ps, pe) = pair_embeddings(cfg, &g)?;
    let report = edge_classification_eval(pe.view(), &ps, &g, &split_spec(cfg), &cfg.classifier)?;
    write_report(cfg, &report)?;
    Ok(report)
}

pub fn eval_link(cfg: &RunConfig) -> Result<EvalReport> {
    prepare(cfg)?;
    let g = load(cfg)?;
    let spec = LinkSpec {
        holdout: cfg.holdout,
        n_repeats: cfg.n_repeats,
        seed: cfg.train.seed,
    };
    let report = link_prediction_eval(&g, &cfg.train, &spec, &cfg.classifier)?;
    write_report(cfg, &report)?;
    Ok(report)
}

/// `metric: mean ± std over n repeats`, one line per metric.
pub fn summary_lines(report: &EvalReport) -> Vec<String> {
    report
        .metrics
        .iter()
        .map(|m| {
            format!(
                "{} {}: {:.4} ± {:.4} over {} repeats",
                report.task,
                m,
                report.mean(m).unwrap_or(f64::NAN),
                report.std(m).unwrap_or(f64::NAN),
                report.repeats()
            )
        })
        .collect()
}

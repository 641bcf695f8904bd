//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use paire::eval::LogRegConfig;
use paire::{StrataThresholds, TrainConfig, Translator};

pub const SEED_ENV: &str = "PAIRE_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub edges: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub node_labels: Option<PathBuf>,
    pub edge_labels: Option<PathBuf>,
    pub directed: bool,
    pub shift_nonneg: bool,
    pub out: PathBuf,
    pub train: TrainConfig,
    pub translator: Translator,
    pub train_ratio: f64,
    pub n_repeats: usize,
    pub holdout: f64,
    pub classifier: LogRegConfig,
    /// 0 means one worker per core.
    pub workers: usize,
    pub pair_embeddings: Option<PathBuf>,
    pub node_embeddings: Option<PathBuf>,
    pub histogram_bins: usize,
    pub strata: StrataThresholds,
    seed_given: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            edges: None,
            features: None,
            node_labels: None,
            edge_labels: None,
            directed: false,
            shift_nonneg: false,
            out: PathBuf::from("paire_out"),
            train: TrainConfig::default(),
            translator: Translator::Sum,
            train_ratio: 0.3,
            n_repeats: 10,
            holdout: 0.15,
            classifier: LogRegConfig::default(),
            workers: 0,
            pair_embeddings: None,
            node_embeddings: None,
            histogram_bins: 10,
            strata: StrataThresholds::default(),
            seed_given: false,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("bad value `{value}` for `{key}`: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("bad value `{value}` for `{key}`: expected true or false"),
    }
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl RunConfig {
    /// Sets one key. Paths are taken relative to `base` when given.
    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<()> {
        let path = |v: &str| -> Option<PathBuf> {
            if v.is_empty() {
                return None;
            }
            let p = PathBuf::from(v);
            Some(match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            })
        };
        match key {
            "edges" => self.edges = path(value),
            "features" => self.features = path(value),
            "node_labels" => self.node_labels = path(value),
            "edge_labels" => self.edge_labels = path(value),
            "directed" => self.directed = parse_bool(key, value)?,
            "shift_nonneg" => self.shift_nonneg = parse_bool(key, value)?,
            "out" => self.out = path(value).ok_or_else(|| anyhow!("`out` must not be empty"))?,
            "epochs" => self.train.epochs = parse(key, value)?,
            "batch_size" => self.train.batch_size = parse(key, value)?,
            "learning_rate" => self.train.learning_rate = parse(key, value)?,
            "weight_ego" => self.train.weight_ego = parse(key, value)?,
            "hidden1" => self.train.hidden1 = parse(key, value)?,
            "hidden2" => self.train.hidden2 = parse(key, value)?,
            "adam_beta1" => self.train.adam_beta1 = parse(key, value)?,
            "adam_beta2" => self.train.adam_beta2 = parse(key, value)?,
            "adam_eps" => self.train.adam_eps = parse(key, value)?,
            "seed" => {
                self.train.seed = parse(key, value)?;
                self.seed_given = true;
            }
            "translator" => self.translator = parse(key, value)?,
            "train_ratio" => self.train_ratio = parse(key, value)?,
            "n_repeats" => self.n_repeats = parse(key, value)?,
            "holdout" => self.holdout = parse(key, value)?,
            "l2_strength" => self.classifier.strength = parse(key, value)?,
            "tolerance" => self.classifier.tol = parse(key, value)?,
            "max_iter" => self.classifier.max_iter = parse(key, value)?,
            "workers" => self.workers = parse(key, value)?,
            "pair_embeddings" => self.pair_embeddings = path(value),
            "node_embeddings" => self.node_embeddings = path(value),
            "histogram_bins" => self.histogram_bins = parse(key, value)?,
            "strata_low_below" => self.strata.low_below = parse(key, value)?,
            "strata_high_from" => self.strata.high_from = parse(key, value)?,
            "weight_agg" | "loss_reduction" => bail!("`{key}` is derived and cannot be set"),
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().filter(|p| !p.as_os_str().is_empty());
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), i + 1))?;
            self.set(k.trim(), v.trim(), base)
                .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        }
        Ok(())
    }

    /// Falls back to `PAIRE_SEED` when no seed was given explicitly.
    pub fn apply_seed_env(&mut self) -> Result<()> {
        if self.seed_given {
            return Ok(());
        }
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.train.seed = parse(SEED_ENV, v.trim())?;
            self.seed_given = true;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            bail!("train_ratio must lie strictly between 0 and 1");
        }
        if !(self.holdout > 0.0 && self.holdout < 1.0) {
            bail!("holdout must lie strictly between 0 and 1");
        }
        if self.n_repeats == 0 {
            bail!("n_repeats must be at least 1");
        }
        if self.histogram_bins == 0 {
            bail!("histogram_bins must be at least 1");
        }
        for (name, p) in [
            ("edges", &self.edges),
            ("features", &self.features),
            ("node_labels", &self.node_labels),
            ("edge_labels", &self.edge_labels),
            ("pair_embeddings", &self.pair_embeddings),
            ("node_embeddings", &self.node_embeddings),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    bail!("{name} file {} does not exist", p.display());
                }
            }
        }
        Ok(())
    }

    /// Every key with its effective value, in the file format.
    pub fn to_text(&self) -> String {
        let t = &self.train;
        let rows: Vec<(&str, String)> = vec![
            ("edges", opt_path(&self.edges)),
            ("features", opt_path(&self.features)),
            ("node_labels", opt_path(&self.node_labels)),
            ("edge_labels", opt_path(&self.edge_labels)),
            ("directed", self.directed.to_string()),
            ("shift_nonneg", self.shift_nonneg.to_string()),
            ("out", self.out.display().to_string()),
            ("seed", t.seed.to_string()),
            ("epochs", t.epochs.to_string()),
            ("batch_size", t.batch_size.to_string()),
            ("learning_rate", t.learning_rate.to_string()),
            ("weight_ego", t.weight_ego.to_string()),
            ("hidden1", t.hidden1.to_string()),
            ("hidden2", t.hidden2.to_string()),
            ("adam_beta1", t.adam_beta1.to_string()),
            ("adam_beta2", t.adam_beta2.to_string()),
            ("adam_eps", t.adam_eps.to_string()),
            ("translator", self.translator.to_string()),
            ("train_ratio", self.train_ratio.to_string()),
            ("n_repeats", self.n_repeats.to_string()),
            ("holdout", self.holdout.to_string()),
            ("l2_strength", self.classifier.strength.to_string()),
            ("tolerance", self.classifier.tol.to_string()),
            ("max_iter", self.classifier.max_iter.to_string()),
            ("workers", self.workers.to_string()),
            ("pair_embeddings", opt_path(&self.pair_embeddings)),
            ("node_embeddings", opt_path(&self.node_embeddings)),
            ("histogram_bins", self.histogram_bins.to_string()),
            ("strata_low_below", self.strata.low_below.to_string()),
            ("strata_high_from", self.strata.high_from.to_string()),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k} = {v}");
        }
        let _ = writeln!(out, "# weight_agg = {}", t.weight_agg());
        let _ = writeln!(out, "# loss_reduction = mean");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_parses_back() {
        let mut c = RunConfig::default();
        c.set("epochs", "3", None).unwrap();
        c.set("translator", "max", None).unwrap();
        c.set("edges", "a/b.tsv", None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("run.conf");
        fs::write(&f, c.to_text()).unwrap();
        let mut d = RunConfig::default();
        d.apply_file(&f).unwrap();
        assert_eq!(d.train.epochs, 3);
        assert_eq!(d.translator, Translator::Max);
        assert_eq!(d.edges, Some(dir.path().join("a/b.tsv")));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut c = RunConfig::default();
        assert!(c.set("epoch", "3", None).is_err());
        assert!(c.set("directed", "maybe", None).is_err());
        assert!(c.set("weight_agg", "0.2", None).is_err());
    }
}

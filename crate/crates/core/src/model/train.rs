use std::time::Instant;

use log::debug;
use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::adam::{adam_step, AdamConfig, AdamState};
use super::network::{backward, batch_losses, encode, forward_batch, TaskWeights};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::features::PairFeatureTable;

/// Training hyperparameters. Defaults: 30 epochs, batch 1024, Adam at 1e-3,
/// equal task weights, hidden sizes 32/32 (128-dim embeddings).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Weight of the ego task; the agg task gets `1 - weight_ego`.
    pub weight_ego: f64,
    pub hidden1: usize,
    pub hidden2: usize,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 30,
            batch_size: 1024,
            learning_rate: 1e-3,
            weight_ego: 0.5,
            hidden1: 32,
            hidden2: 32,
            seed: 0,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn weight_agg(&self) -> f64 {
        1.0 - self.weight_ego
    }

    pub fn task_weights(&self) -> TaskWeights {
        TaskWeights::from_ego(self.weight_ego)
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }

    pub fn embedding_dim(&self) -> usize {
        2 * self.hidden1 + 2 * self.hidden2
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.weight_ego) {
            return bad("weight_ego must lie in [0, 1]");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if self.hidden1 == 0 || self.hidden2 == 0 {
            return bad("hidden sizes must be at least 1");
        }
        Ok(())
    }
}

/// Mean losses over one pass through the data.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub loss_total: f64,
    pub loss_ego: f64,
    pub loss_agg: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct TrainLog {
    pub epochs: Vec<EpochLog>,
    pub steps: u64,
}

impl TrainLog {
    /// CSV with header `epoch,loss_total,loss_ego,loss_agg,seconds`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss_total,loss_ego,loss_agg,seconds\n");
        for e in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{},{:.6}\n",
                e.epoch, e.loss_total, e.loss_ego, e.loss_agg, e.seconds
            ));
        }
        out
    }
}

/// Mini-batch trainer. Each epoch reshuffles the pair order with a seeded
/// generator, so a fixed seed reproduces the run bit for bit.
pub struct Trainer<'a> {
    data: &'a PairFeatureTable,
    config: TrainConfig,
    params: ModelParams,
    adam: AdamState,
    rng: ChaCha8Rng,
    order: Vec<usize>,
    epoch: usize,
    log: TrainLog,
}

impl<'a> Trainer<'a> {
    pub fn new(data: &'a PairFeatureTable, config: TrainConfig) -> Result<Self> {
        config.validate()?;
        if data.is_empty() {
            return Err(Error::Empty("no pairs to train on"));
        }
        let params = ModelParams::init(data.width(), config.hidden1, config.hidden2, config.seed);
        Ok(Self::with_params(data, config, params))
    }

    /// Starts from given parameters instead of a fresh initialization.
    pub fn with_params(data: &'a PairFeatureTable, config: TrainConfig, params: ModelParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(1);
        Trainer {
            data,
            adam: AdamState::new(&params),
            params,
            rng,
            order: (0..data.len()).collect(),
            epoch: 0,
            log: TrainLog::default(),
            config,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn log(&self) -> &TrainLog {
        &self.log
    }

    /// Runs one epoch and returns its log line.
    pub fn run_epoch(&mut self) -> Result<EpochLog> {
        let start = Instant::now();
        let weights = self.config.task_weights();
        let adam = self.config.adam();
        self.order.shuffle(&mut self.rng);

        let (mut sum_ego, mut sum_agg) = (0.0, 0.0);
        for (batch, idx) in self.order.chunks(self.config.batch_size).enumerate() {
            let diverged = |stage| Error::Diverged {
                stage,
                epoch: self.epoch,
                batch,
            };
            let x_ego = self.data.ego.select(Axis(0), idx);
            let x_agg = self.data.agg.select(Axis(0), idx);
            let cache = forward_batch(&self.params, x_ego.view(), x_agg.view()).map_err(|e| match e {
                Error::NonFinite(stage) => diverged(stage),
                other => other,
            })?;
            let (le, la) = batch_losses(&cache, x_ego.view(), x_agg.view());
            if !(le.is_finite() && la.is_finite()) {
                return Err(diverged("loss"));
            }
            sum_ego += le * idx.len() as f64;
            sum_agg += la * idx.len() as f64;
            let grads = backward(&self.params, &cache, x_ego.view(), x_agg.view(), weights);
            adam_step(&mut self.params, &grads, &mut self.adam, &adam);
        }

        let n = self.data.len() as f64;
        let (loss_ego, loss_agg) = (sum_ego / n, sum_agg / n);
        let entry = EpochLog {
            epoch: self.epoch,
            loss_total: weights.ego * loss_ego + weights.agg * loss_agg,
            loss_ego,
            loss_agg,
            seconds: start.elapsed().as_secs_f64(),
        };
        debug!(
            "epoch {} loss {:.6} (ego {:.6}, agg {:.6}) {:.2}s",
            entry.epoch, entry.loss_total, entry.loss_ego, entry.loss_agg, entry.seconds
        );
        self.epoch += 1;
        self.log.steps = self.adam.step;
        self.log.epochs.push(entry.clone());
        Ok(entry)
    }

    pub fn finish(self) -> (ModelParams, TrainLog) {
        (self.params, self.log)
    }
}

/// Trains for `config.epochs` epochs.
pub fn train(data: &PairFeatureTable, config: &TrainConfig) -> Result<(ModelParams, TrainLog)> {
    let mut trainer = Trainer::new(data, config.clone())?;
    for _ in 0..config.epochs {
        trainer.run_epoch()?;
    }
    Ok(trainer.finish())
}

/// Pair embeddings `h_emb`, one row per pair in dataset order.
pub fn embed_pairs(params: &ModelParams, data: &PairFeatureTable) -> Array2<f64> {
    const CHUNK: usize = 4096;
    let mut out = Array2::zeros((data.len(), params.embedding_dim()));
    for (i, mut block) in out.axis_chunks_iter_mut(Axis(0), CHUNK).enumerate() {
        let lo = i * CHUNK;
        let hi = lo + block.nrows();
        let [_, _, _, _, emb] = encode(
            params,
            data.ego.slice(ndarray::s![lo..hi, ..]),
            data.agg.slice(ndarray::s![lo..hi, ..]),
        );
        block.assign(&emb);
    }
    out
}

//! Forward pass, KL reconstruction loss and analytic gradients.
//!
//! Both encoder branches are linear: `h1 = x·W1 + b1`, `h2 = h1·W2 + b2`.
//! The embedding concatenates `h1_ego, h2_ego, h1_agg, h2_agg`, and each
//! decoder is an affine map of the full embedding followed by a softmax.

use ndarray::{concatenate, s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use super::params::{Dense, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{matmul, matmul_nt, matmul_tn};

/// Floor applied to `Q` inside the logarithm.
pub const Q_FLOOR: f64 = 1e-12;

/// Intermediate activations of a batch, kept for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub h1_ego: Array2<f64>,
    pub h2_ego: Array2<f64>,
    pub h1_agg: Array2<f64>,
    pub h2_agg: Array2<f64>,
    /// `concat(h1_ego, h2_ego, h1_agg, h2_agg)`, one row per pair.
    pub embedding: Array2<f64>,
    pub q_ego: Array2<f64>,
    pub q_agg: Array2<f64>,
}

/// Task weights of the combined loss; `agg = 1 - ego`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskWeights {
    pub ego: f64,
    pub agg: f64,
}

impl TaskWeights {
    pub fn from_ego(ego: f64) -> Self {
        TaskWeights {
            ego,
            agg: 1.0 - ego,
        }
    }
}

fn affine(x: ArrayView2<'_, f64>, layer: &Dense) -> Array2<f64> {
    let mut out = matmul(x, layer.weight.view());
    out += &layer.bias;
    out
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(mut logits: Array2<f64>) -> Array2<f64> {
    for mut row in logits.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|z| (z - max).exp());
        let total = row.sum();
        row /= total;
    }
    logits
}

fn check_finite(m: &Array2<f64>, stage: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(stage))
    }
}

/// Encoder half of the forward pass: returns the four hidden blocks and the
/// concatenated embedding.
pub fn encode(
    params: &ModelParams,
    x_ego: ArrayView2<'_, f64>,
    x_agg: ArrayView2<'_, f64>,
) -> [Array2<f64>; 5] {
    let h1_ego = affine(x_ego, &params.enc_ego_1);
    let h2_ego = affine(h1_ego.view(), &params.enc_ego_2);
    let h1_agg = affine(x_agg, &params.enc_agg_1);
    let h2_agg = affine(h1_agg.view(), &params.enc_agg_2);
    let embedding = concatenate(
        Axis(1),
        &[h1_ego.view(), h2_ego.view(), h1_agg.view(), h2_agg.view()],
    )
    .expect("blocks share the batch dimension");
    [h1_ego, h2_ego, h1_agg, h2_agg, embedding]
}

/// Batched forward pass; rows of `x_ego` / `x_agg` are pair distributions.
pub fn forward_batch(
    params: &ModelParams,
    x_ego: ArrayView2<'_, f64>,
    x_agg: ArrayView2<'_, f64>,
) -> Result<ForwardCache> {
    let f = params.input_width();
    if x_ego.ncols() != f || x_agg.ncols() != f || x_ego.nrows() != x_agg.nrows() {
        return Err(Error::Shape(format!(
            "inputs {:?} / {:?} for a model of width {f}",
            x_ego.dim(),
            x_agg.dim()
        )));
    }
    let [h1_ego, h2_ego, h1_agg, h2_agg, embedding] = encode(params, x_ego, x_agg);
    check_finite(&embedding, "embedding")?;
    let logits_ego = affine(embedding.view(), &params.dec_ego);
    let logits_agg = affine(embedding.view(), &params.dec_agg);
    check_finite(&logits_ego, "ego decoder")?;
    check_finite(&logits_agg, "agg decoder")?;
    Ok(ForwardCache {
        h1_ego,
        h2_ego,
        h1_agg,
        h2_agg,
        embedding,
        q_ego: softmax_rows(logits_ego),
        q_agg: softmax_rows(logits_agg),
    })
}

/// Single-pair forward pass. Returns `(h_emb, Q_ego, Q_agg, cache)`.
pub fn forward(
    params: &ModelParams,
    x_ego: ArrayView1<'_, f64>,
    x_agg: ArrayView1<'_, f64>,
) -> Result<(Array1<f64>, Array1<f64>, Array1<f64>, ForwardCache)> {
    let e = x_ego.insert_axis(Axis(0));
    let a = x_agg.insert_axis(Axis(0));
    let cache = forward_batch(params, e, a)?;
    Ok((
        cache.embedding.row(0).to_owned(),
        cache.q_ego.row(0).to_owned(),
        cache.q_agg.row(0).to_owned(),
        cache,
    ))
}

/// `Σ_j P(j)·ln(P(j)/Q(j))` with `0·ln 0 = 0` and `Q` floored at
/// [`Q_FLOOR`].
pub fn kl_loss(p: ArrayView1<'_, f64>, q: ArrayView1<'_, f64>) -> f64 {
    p.iter()
        .zip(q.iter())
        .filter(|(&pj, _)| pj > 0.0)
        .map(|(&pj, &qj)| pj * (pj / qj.max(Q_FLOOR)).ln())
        .sum()
}

/// Per-task batch losses, averaged over rows: `(ego, agg)`.
pub fn batch_losses(
    cache: &ForwardCache,
    p_ego: ArrayView2<'_, f64>,
    p_agg: ArrayView2<'_, f64>,
) -> (f64, f64) {
    let mean_kl = |p: ArrayView2<'_, f64>, q: &Array2<f64>| -> f64 {
        let n = p.nrows().max(1) as f64;
        p.rows()
            .into_iter()
            .zip(q.rows())
            .map(|(pr, qr)| kl_loss(pr, qr))
            .sum::<f64>()
            / n
    };
    (mean_kl(p_ego, &cache.q_ego), mean_kl(p_agg, &cache.q_agg))
}

/// Weighted mean loss `w_ego·KL_ego + w_agg·KL_agg` over the batch.
pub fn total_loss(
    params: &ModelParams,
    x_ego: ArrayView2<'_, f64>,
    x_agg: ArrayView2<'_, f64>,
    weights: TaskWeights,
) -> Result<f64> {
    let cache = forward_batch(params, x_ego, x_agg)?;
    let (le, la) = batch_losses(&cache, x_ego, x_agg);
    Ok(weights.ego * le + weights.agg * la)
}

fn dense_grad(input: ArrayView2<'_, f64>, delta: &Array2<f64>) -> Dense {
    Dense {
        weight: matmul_tn(input, delta.view()),
        bias: delta.sum_axis(Axis(0)),
    }
}

/// Gradients of the batch-mean weighted loss with respect to every
/// parameter. The inputs double as reconstruction targets.
pub fn backward(
    params: &ModelParams,
    cache: &ForwardCache,
    x_ego: ArrayView2<'_, f64>,
    x_agg: ArrayView2<'_, f64>,
    weights: TaskWeights,
) -> ModelParams {
    let n = x_ego.nrows() as f64;
    let (h1, h2) = (params.hidden1(), params.hidden2());
    assert_eq!(cache.embedding.ncols(), 2 * h1 + 2 * h2, "cache/params mismatch");
    assert_eq!(cache.q_ego.dim(), x_ego.dim(), "cache/input mismatch");

    // d(KL(P‖softmax(z)))/dz = Q - P for each row
    let d_logits_ego = (&cache.q_ego - &x_ego) * (weights.ego / n);
    let d_logits_agg = (&cache.q_agg - &x_agg) * (weights.agg / n);

    let dec_ego = dense_grad(cache.embedding.view(), &d_logits_ego);
    let dec_agg = dense_grad(cache.embedding.view(), &d_logits_agg);

    let mut d_emb = matmul_nt(d_logits_ego.view(), params.dec_ego.weight.view());
    d_emb += &matmul_nt(d_logits_agg.view(), params.dec_agg.weight.view());

    let d_h1_ego = d_emb.slice(s![.., ..h1]);
    let d_h2_ego = d_emb.slice(s![.., h1..h1 + h2]).to_owned();
    let d_h1_agg = d_emb.slice(s![.., h1 + h2..2 * h1 + h2]);
    let d_h2_agg = d_emb.slice(s![.., 2 * h1 + h2..]).to_owned();

    let enc_ego_2 = dense_grad(cache.h1_ego.view(), &d_h2_ego);
    let enc_agg_2 = dense_grad(cache.h1_agg.view(), &d_h2_agg);

    // h1 feeds the embedding directly and through the second layer
    let d_h1_ego = &d_h1_ego + &matmul_nt(d_h2_ego.view(), params.enc_ego_2.weight.view());
    let d_h1_agg = &d_h1_agg + &matmul_nt(d_h2_agg.view(), params.enc_agg_2.weight.view());

    ModelParams {
        enc_ego_1: dense_grad(x_ego, &d_h1_ego),
        enc_ego_2,
        enc_agg_1: dense_grad(x_agg, &d_h1_agg),
        enc_agg_2,
        dec_ego,
        dec_agg,
    }
}

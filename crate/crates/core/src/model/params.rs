use ndarray::{Array1, Array2};
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Affine layer `y = x·W + b` with `W` stored as `in × out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Dense {
    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Dense {
            weight: Array2::zeros((fan_in, fan_out)),
            bias: Array1::zeros(fan_out),
        }
    }

    /// Glorot-uniform weights, zero bias.
    fn glorot(fan_in: usize, fan_out: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        let dist = Uniform::new_inclusive(-limit, limit).expect("finite bounds");
        let weight = Array2::from_shape_simple_fn((fan_in, fan_out), || dist.sample(rng));
        Dense {
            weight,
            bias: Array1::zeros(fan_out),
        }
    }

    pub fn fan_in(&self) -> usize {
        self.weight.nrows()
    }

    pub fn fan_out(&self) -> usize {
        self.weight.ncols()
    }
}

/// Weights of the two-branch encoder and the two softmax decoders.
///
/// Gradients and Adam moments reuse this type, one tensor per weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub enc_ego_1: Dense,
    pub enc_ego_2: Dense,
    pub enc_agg_1: Dense,
    pub enc_agg_2: Dense,
    pub dec_ego: Dense,
    pub dec_agg: Dense,
}

/// Tensor names in checkpoint order.
pub const TENSOR_NAMES: [&str; 12] = [
    "enc_ego_1.weight",
    "enc_ego_1.bias",
    "enc_ego_2.weight",
    "enc_ego_2.bias",
    "enc_agg_1.weight",
    "enc_agg_1.bias",
    "enc_agg_2.weight",
    "enc_agg_2.bias",
    "dec_ego.weight",
    "dec_ego.bias",
    "dec_agg.weight",
    "dec_agg.bias",
];

impl ModelParams {
    /// Seeded Glorot initialization for feature width `f` and hidden sizes
    /// `h1`, `h2`.
    pub fn init(f: usize, h1: usize, h2: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let emb = 2 * h1 + 2 * h2;
        ModelParams {
            enc_ego_1: Dense::glorot(f, h1, &mut rng),
            enc_ego_2: Dense::glorot(h1, h2, &mut rng),
            enc_agg_1: Dense::glorot(f, h1, &mut rng),
            enc_agg_2: Dense::glorot(h1, h2, &mut rng),
            dec_ego: Dense::glorot(emb, f, &mut rng),
            dec_agg: Dense::glorot(emb, f, &mut rng),
        }
    }

    pub fn zeros(f: usize, h1: usize, h2: usize) -> Self {
        let emb = 2 * h1 + 2 * h2;
        ModelParams {
            enc_ego_1: Dense::zeros(f, h1),
            enc_ego_2: Dense::zeros(h1, h2),
            enc_agg_1: Dense::zeros(f, h1),
            enc_agg_2: Dense::zeros(h1, h2),
            dec_ego: Dense::zeros(emb, f),
            dec_agg: Dense::zeros(emb, f),
        }
    }

    pub fn zeros_like(&self) -> Self {
        ModelParams::zeros(self.input_width(), self.hidden1(), self.hidden2())
    }

    pub fn input_width(&self) -> usize {
        self.enc_ego_1.fan_in()
    }

    pub fn hidden1(&self) -> usize {
        self.enc_ego_1.fan_out()
    }

    pub fn hidden2(&self) -> usize {
        self.enc_ego_2.fan_out()
    }

    /// Width of the concatenated embedding, `2·h1 + 2·h2`.
    pub fn embedding_dim(&self) -> usize {
        2 * self.hidden1() + 2 * self.hidden2()
    }

    fn layers(&self) -> [&Dense; 6] {
        [
            &self.enc_ego_1,
            &self.enc_ego_2,
            &self.enc_agg_1,
            &self.enc_agg_2,
            &self.dec_ego,
            &self.dec_agg,
        ]
    }

    fn layers_mut(&mut self) -> [&mut Dense; 6] {
        [
            &mut self.enc_ego_1,
            &mut self.enc_ego_2,
            &mut self.enc_agg_1,
            &mut self.enc_agg_2,
            &mut self.dec_ego,
            &mut self.dec_agg,
        ]
    }

    /// Flat views of every tensor, in [`TENSOR_NAMES`] order.
    pub fn tensors(&self) -> Vec<&[f64]> {
        self.layers()
            .into_iter()
            .flat_map(|l| {
                [
                    l.weight.as_slice().expect("standard layout"),
                    l.bias.as_slice().expect("standard layout"),
                ]
            })
            .collect()
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers_mut()
            .into_iter()
            .flat_map(|l| {
                [
                    l.weight.as_slice_mut().expect("standard layout"),
                    l.bias.as_slice_mut().expect("standard layout"),
                ]
            })
            .collect()
    }

    /// `(rows, cols)` of every tensor; biases are `(1, len)`.
    pub fn tensor_shapes(&self) -> Vec<(usize, usize)> {
        self.layers()
            .into_iter()
            .flat_map(|l| [l.weight.dim(), (1, l.bias.len())])
            .collect()
    }

    pub fn n_params(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|t| t.iter().all(|x| x.is_finite()))
    }
}

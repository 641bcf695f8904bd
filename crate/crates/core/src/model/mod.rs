//! The dual-task reconstruction autoencoder.

mod adam;
mod checkpoint;
mod network;
mod params;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{load_checkpoint, parse_checkpoint, save_checkpoint, write_checkpoint, MAGIC};
pub use network::{
    backward, batch_losses, encode, forward, forward_batch, kl_loss, softmax_rows, total_loss,
    ForwardCache, TaskWeights, Q_FLOOR,
};
pub use params::{Dense, ModelParams, TENSOR_NAMES};
pub use train::{embed_pairs, train, EpochLog, TrainConfig, TrainLog, Trainer};

//! Analogy-style bilinear embeddings: scoring, logistic loss, Adagrad
//! training, ranking, link-prediction evaluation and checkpoints.

mod blocks;
mod checkpoint;
mod eval;
mod loss;
mod model;
mod rank;
mod train;

use thiserror::Error;

use crate::kg::{EntityId, Relation};

pub use blocks::{
    bilinear, commutator_residual, normality_residual, BlockDiagonalMap, BlockStructure,
};
pub use checkpoint::{
    checkpoint_from_str, checkpoint_to_string, load_checkpoint, save_checkpoint,
    CHECKPOINT_VERSION,
};
pub use eval::{evaluate, random_baseline, Metrics, Protocol, RandomBaseline};
pub use loss::{gradient, loss, loss_and_gradient, Gradient, Labeled};
pub use model::EmbeddingSet;
pub use rank::{rank_heads, rank_tails, Query, RankResult};
pub use train::{train, TrainConfig, TrainReport};

#[derive(Debug, Error)]
pub enum KgeError {
    #[error("no embedding for entity {0}")]
    UnknownEntity(EntityId),
    #[error("no relation map for {0}")]
    UnknownRelation(Relation),
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("triple collection is empty")]
    EmptySplit,
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("training diverged: non-finite loss in epoch {epoch}, batch {batch}")]
    Diverged { epoch: usize, batch: usize },
    #[error("parameters are not finite")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint holds {found} values, expected {expected}")]
    ScalarMismatch { found: String, expected: &'static str },
    #[error("checkpoint checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error("checkpoint line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}

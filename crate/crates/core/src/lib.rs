//! One-shot task-plan generalization: a typed household knowledge graph, its
//! bilinear embedding, a symbolic world simulator, the queue-driven plan
//! generalizer with pluggable knowledge sources, baselines and a benchmark
//! harness.

pub mod baselines;
pub mod bench;
pub mod kg;
pub mod kge;
pub mod rng;
pub mod scalar;
pub mod taskgen;
pub mod world;

pub use scalar::Scalar;

/// Double-precision embeddings, the default for training and experiments.
pub type Embeddings = kge::EmbeddingSet<f64>;
pub type Embeddings32 = kge::EmbeddingSet<f32>;

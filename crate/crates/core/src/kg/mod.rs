//! Typed household knowledge graph: entity catalog, relations, weighted
//! triples, train/valid/test datasets and the closed-world ground truth.

mod catalog;
mod corrupt;
mod dataset;
mod io;
mod relation;
mod synth;
mod triple;
pub mod vocab;

use thiserror::Error;

pub use catalog::{Catalog, Entity, EntityId, EntityKind};
pub use corrupt::{Corruption, Corruptor};
pub use dataset::{Dataset, GroundTruth};
pub use io::{
    dataset_to_tsv, ground_truth_to_tsv, load_ground_truth, load_triples, parse_ground_truth,
    parse_triples,
};
pub use relation::Relation;
pub use synth::{
    generate_synthetic_kg, split_dataset, Profile, SplitRatios, WeightModel, REFERENCE_COUNTS,
};
pub use triple::{count_by_relation, Split, Triple, TripleIndex, TripleKey};
pub use vocab::{default_catalog, semantic_groups};


#[derive(Debug, Error)]
pub enum KgError {
    #[error("entity name `{0}` is empty or contains whitespace")]
    InvalidName(String),
    #[error("duplicate entity `{0}`")]
    DuplicateEntity(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("unknown entity kind `{0}`")]
    UnknownKind(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown split `{0}`")]
    UnknownSplit(String),
    #[error("triple weight must be at least 1")]
    ZeroWeight,
    #[error(
        "kind signature violated for {relation}: {head} ({head_kind}) -> {tail} ({tail_kind})"
    )]
    KindSignature {
        relation: Relation,
        head: String,
        head_kind: EntityKind,
        tail: String,
        tail_kind: EntityKind,
    },
    #[error("split overlap: {0} appears in more than one split")]
    SplitOverlap(String),
    #[error("duplicate triple {0} within a split")]
    DuplicateTriple(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("invalid relation profile: {0}")]
    InvalidProfile(String),
    #[error("profile infeasible: {0}")]
    ProfileInfeasible(String),
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),
    #[error("{relation} has {available} triples, too few to split")]
    TooFewForSplit { relation: Relation, available: usize },
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}

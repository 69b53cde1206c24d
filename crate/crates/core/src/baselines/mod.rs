//! Comparison knowledge sources: training-set memorization (TM), word-vector
//! similarity (WE), the plan network (PN) and a single demonstration (SD).
//! The relation-subset KGE model is built with `TrainConfig::relation_subset`
//! and queried through [`crate::taskgen::KgeSource`].

use std::collections::BTreeSet;
use std::io;

use thiserror::Error;

use crate::kg::Relation;

mod pn;
mod sd;
mod tm;
mod we;

pub use pn::{pn_observe, PlanNetworkStore};
pub use sd::{sd_source, SingleDemo};
pub use tm::{tm_query, TrainingMemory};
pub use we::{synthetic_word_vectors, we_query, Coverage, WordVectorSource, WordVectorTable};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("zero vector for `{0}`")]
    ZeroVector(String),
    #[error("vector for `{token}` has {found} components, expected {expected}")]
    Dimension {
        token: String,
        found: usize,
        expected: usize,
    },
    #[error("{0}: {1}")]
    Io(String, #[source] io::Error),
}

/// Relations kept by the reduced-vocabulary KGE model.
pub fn rcse_relations() -> BTreeSet<Relation> {
    [Relation::ObjInLoc, Relation::ObjUsedTo].into_iter().collect()
}

use std::cmp::Ordering;

use super::{EmbeddingSet, KgeError};
use crate::kg::{EntityId, Relation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    Tails { head: EntityId, relation: Relation },
    Heads { relation: Relation, tail: EntityId },
}

/// Candidates ordered by score, highest first; equal scores by id ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult<T> {
    pub query: Query,
    pub ranked: Vec<(EntityId, T)>,
}

impl<T: Scalar> RankResult<T> {
    pub fn entities(&self) -> Vec<EntityId> {
        self.ranked.iter().map(|(e, _)| *e).collect()
    }

    /// 1-based position of `e`.
    pub fn position(&self, e: EntityId) -> Option<usize> {
        self.ranked.iter().position(|(x, _)| *x == e).map(|p| p + 1)
    }
}

pub(crate) fn by_score<T: Scalar>(a: &(EntityId, T), b: &(EntityId, T)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .unwrap_or(Ordering::Equal)
        .then(a.0.cmp(&b.0))
}

fn ranked<T: Scalar>(
    query: Query,
    candidates: &[EntityId],
    mut score: impl FnMut(EntityId) -> Result<T, KgeError>,
) -> Result<RankResult<T>, KgeError> {
    if candidates.is_empty() {
        return Err(KgeError::EmptyCandidates);
    }
    let mut ranked = candidates
        .iter()
        .map(|c| score(*c).map(|s| (*c, s)))
        .collect::<Result<Vec<_>, _>>()?;
    ranked.sort_by(by_score);
    ranked.dedup_by_key(|(e, _)| *e);
    Ok(RankResult { query, ranked })
}

pub fn rank_tails<T: Scalar>(
    theta: &EmbeddingSet<T>,
    head: EntityId,
    relation: Relation,
    candidates: &[EntityId],
) -> Result<RankResult<T>, KgeError> {
    ranked(Query::Tails { head, relation }, candidates, |t| {
        theta.score(head, relation, t)
    })
}

pub fn rank_heads<T: Scalar>(
    theta: &EmbeddingSet<T>,
    relation: Relation,
    tail: EntityId,
    candidates: &[EntityId],
) -> Result<RankResult<T>, KgeError> {
    ranked(Query::Heads { relation, tail }, candidates, |h| {
        theta.score(h, relation, tail)
    })
}

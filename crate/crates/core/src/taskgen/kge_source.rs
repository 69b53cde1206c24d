//! Knowledge source backed by a trained embedding. Scores from several
//! relations are fused as a sum of sigmoids; a relation the embedding lacks
//! contributes nothing.

use super::KnowledgeSource;
use crate::kg::{EntityId, EntityKind, Relation};
use crate::kge::EmbeddingSet;
use crate::scalar::{sigmoid, Scalar};
use crate::world::{LocationSlot, WorldState};

/// `sigma(f(target, ObjCanBe, v))` must exceed this for `v` to be kept.
pub const CAN_BE_THRESHOLD: f64 = 0.5;

fn calibrated<T: Scalar>(theta: &EmbeddingSet<T>, h: EntityId, r: Relation, t: EntityId) -> Option<f64> {
    theta.score(h, r, t).ok().map(|f| sigmoid(f).f64())
}

fn fused<T: Scalar>(theta: &EmbeddingSet<T>, terms: &[(EntityId, Relation, EntityId)]) -> f64 {
    terms
        .iter()
        .filter_map(|(h, r, t)| calibrated(theta, *h, *r, *t))
        .sum()
}

fn ranked<K: Copy + Ord>(mut scored: Vec<(K, f64)>, limit: usize) -> Vec<(K, f64)> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(limit);
    scored
}

/// Location instances of `env` ranked by
/// `sigma(o InLoc c) + sigma(o OnLoc c) + sigma(o InRoom room)`; ties by
/// instance id.
pub fn kge_locations_for<T: Scalar>(
    theta: &EmbeddingSet<T>,
    object: EntityId,
    env: &WorldState,
    limit: usize,
) -> Vec<(LocationSlot, f64)> {
    let scored = env
        .locations()
        .iter()
        .map(|l| {
            let s = fused(
                theta,
                &[
                    (object, Relation::ObjInLoc, l.slot.class),
                    (object, Relation::ObjOnLoc, l.slot.class),
                    (object, Relation::ObjInRoom, l.slot.room),
                ],
            );
            (l.id, s)
        })
        .collect();
    ranked(scored, limit)
        .into_iter()
        .map(|(id, s)| (env.slot(id), s))
        .collect()
}

/// Object classes ranked by `sigma(c UsedTo a) + sigma(c OperatesOn target)`.
pub fn kge_objects_for<T: Scalar>(
    theta: &EmbeddingSet<T>,
    action: EntityId,
    target: EntityId,
    limit: usize,
) -> Vec<(EntityId, f64)> {
    let scored = theta
        .catalog()
        .of_kind(EntityKind::Object)
        .into_iter()
        .filter(|c| *c != target)
        .map(|c| {
            let s = fused(
                theta,
                &[(c, Relation::ObjUsedTo, action), (c, Relation::OperatesOn, target)],
            );
            (c, s)
        })
        .collect();
    ranked(scored, limit)
}

/// Actions ranked by `sigma(v HasEffect effect)`, dropping those the target
/// is unlikely to admit.
pub fn kge_actions_for<T: Scalar>(
    theta: &EmbeddingSet<T>,
    effect: EntityId,
    target: EntityId,
    limit: usize,
) -> Vec<(EntityId, f64)> {
    let scored = theta
        .catalog()
        .of_kind(EntityKind::Action)
        .into_iter()
        .filter(|v| {
            calibrated(theta, target, Relation::ObjCanBe, *v).is_none_or(|p| p > CAN_BE_THRESHOLD)
        })
        .map(|v| (v, fused(theta, &[(v, Relation::HasEffect, effect)])))
        .collect();
    ranked(scored, limit)
}

pub struct KgeSource<'a, T> {
    theta: &'a EmbeddingSet<T>,
    name: String,
}

impl<'a, T: Scalar> KgeSource<'a, T> {
    pub fn new(theta: &'a EmbeddingSet<T>) -> Self {
        Self::named(theta, "kge")
    }

    pub fn named(theta: &'a EmbeddingSet<T>, name: &str) -> Self {
        Self {
            theta,
            name: name.to_string(),
        }
    }
}

impl<T: Scalar> KnowledgeSource for KgeSource<'_, T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        kge_locations_for(self.theta, object, env, limit)
            .into_iter()
            .map(|(s, _)| s)
            .collect()
    }

    fn objects_for(&self, action: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        kge_objects_for(self.theta, action, target, limit)
            .into_iter()
            .map(|(c, _)| c)
            .collect()
    }

    fn actions_for(&self, effect: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        kge_actions_for(self.theta, effect, target, limit)
            .into_iter()
            .map(|(v, _)| v)
            .collect()
    }
}

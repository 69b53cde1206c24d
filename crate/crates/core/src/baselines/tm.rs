//! Training-set memorization: exact lookups over training triples, ranked
//! by observation weight. Nothing outside the training split is ever
//! returned.

use std::collections::HashMap;

use crate::kg::{Dataset, EntityId, EntityKind, Relation, TripleKey};
use crate::kge::Query;
use crate::taskgen::KnowledgeSource;
use crate::world::{LocationSlot, WorldState};

pub struct TrainingMemory {
    weights: HashMap<TripleKey, u64>,
    objects: Vec<EntityId>,
    actions: Vec<EntityId>,
}

impl TrainingMemory {
    pub fn new(dataset: &Dataset) -> Self {
        let catalog = dataset.catalog();
        Self {
            weights: dataset.train().iter().map(|t| (t.key(), t.weight as u64)).collect(),
            objects: catalog.of_kind(EntityKind::Object),
            actions: catalog.of_kind(EntityKind::Action),
        }
    }

    pub fn weight(&self, h: EntityId, r: Relation, t: EntityId) -> u64 {
        self.weights.get(&TripleKey::new(h, r, t)).copied().unwrap_or(0)
    }

    /// Exact `(h, r, ?)` or `(?, r, t)` matches by weight, highest first;
    /// ties by id.
    pub fn query(&self, q: Query) -> Vec<(EntityId, u64)> {
        let mut out: Vec<(EntityId, u64)> = self
            .weights
            .iter()
            .filter_map(|(k, w)| match q {
                Query::Tails { head, relation } if k.head == head && k.relation == relation => Some((k.tail, *w)),
                Query::Heads { relation, tail } if k.tail == tail && k.relation == relation => Some((k.head, *w)),
                _ => None,
            })
            .collect();
        sort(&mut out);
        out
    }
}

fn sort<K: Ord + Copy>(v: &mut [(K, u64)]) {
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
}

/// Answers over a dataset's training split; see [`TrainingMemory::query`].
pub fn tm_query(dataset: &Dataset, q: Query) -> Vec<(EntityId, u64)> {
    TrainingMemory::new(dataset).query(q)
}

impl KnowledgeSource for TrainingMemory {
    fn name(&self) -> &str {
        "tm"
    }

    /// Instances whose class holds the object in training data, boosted by a
    /// matching training room fact.
    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        let mut scored: Vec<(crate::world::LocId, u64)> = env
            .locations()
            .iter()
            .filter_map(|l| {
                let support = self.weight(object, Relation::ObjInLoc, l.slot.class)
                    + self.weight(object, Relation::ObjOnLoc, l.slot.class);
                (support > 0).then(|| (l.id, support + self.weight(object, Relation::ObjInRoom, l.slot.room)))
            })
            .collect();
        sort(&mut scored);
        scored.into_iter().take(limit).map(|(id, _)| env.slot(id)).collect()
    }

    fn objects_for(&self, action: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        let mut scored: Vec<(EntityId, u64)> = self
            .objects
            .iter()
            .filter(|c| **c != target)
            .filter_map(|c| {
                let used = self.weight(*c, Relation::ObjUsedTo, action);
                (used > 0).then(|| (*c, used + self.weight(*c, Relation::OperatesOn, target)))
            })
            .collect();
        sort(&mut scored);
        scored.into_iter().take(limit).map(|(c, _)| c).collect()
    }

    fn actions_for(&self, effect: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        let mut scored: Vec<(EntityId, u64)> = self
            .actions
            .iter()
            .filter(|v| self.weight(target, Relation::ObjCanBe, **v) > 0)
            .filter_map(|v| {
                let w = self.weight(*v, Relation::HasEffect, effect);
                (w > 0).then_some((*v, w))
            })
            .collect();
        sort(&mut scored);
        scored.into_iter().take(limit).map(|(v, _)| v).collect()
    }
}

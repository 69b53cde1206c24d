//! Plan network: a frequency repository of substitutions seen in oracle
//! solutions of earlier episodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kg::{Catalog, EntityId};
use crate::taskgen::KnowledgeSource;
use crate::world::{Goal, LocationSlot, Solution, WorldState};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanNetworkStore {
    locations: BTreeMap<EntityId, BTreeMap<LocationSlot, u64>>,
    objects: BTreeMap<(EntityId, EntityId), BTreeMap<EntityId, u64>>,
    actions: BTreeMap<(EntityId, EntityId), BTreeMap<EntityId, u64>>,
    observations: u64,
}

fn ranked<K: Ord + Copy>(table: Option<&BTreeMap<K, u64>>) -> Vec<K> {
    let mut v: Vec<(K, u64)> = table
        .map(|t| t.iter().map(|(k, n)| (*k, *n)).collect())
        .unwrap_or_default();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    v.into_iter().map(|(k, _)| k).collect()
}

impl PlanNetworkStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one valid solution for `goal`.
    pub fn observe(&mut self, goal: Goal, solution: &Solution) {
        *self
            .locations
            .entry(solution.object)
            .or_default()
            .entry(solution.location)
            .or_default() += 1;
        *self
            .objects
            .entry((solution.action, goal.target))
            .or_default()
            .entry(solution.object)
            .or_default() += 1;
        *self
            .actions
            .entry((goal.effect, goal.target))
            .or_default()
            .entry(solution.action)
            .or_default() += 1;
        self.observations += 1;
    }

    pub fn observations(&self) -> u64 {
        self.observations
    }

    pub fn is_empty(&self) -> bool {
        self.observations == 0
    }

    /// Three TSV tables, each `key TAB candidate TAB count`.
    pub fn to_tsv(&self, catalog: &Catalog) -> String {
        let mut out = String::from("# table\tkey\tcandidate\tcount\n");
        for (o, t) in &self.locations {
            for (slot, n) in t {
                out.push_str(&format!("location\t{}\t{}\t{n}\n", catalog.name(*o), slot.describe(catalog)));
            }
        }
        for ((a, target), t) in &self.objects {
            for (o, n) in t {
                out.push_str(&format!(
                    "object\t{}:{}\t{}\t{n}\n",
                    catalog.name(*a),
                    catalog.name(*target),
                    catalog.name(*o)
                ));
            }
        }
        for ((e, target), t) in &self.actions {
            for (a, n) in t {
                out.push_str(&format!(
                    "action\t{}:{}\t{}\t{n}\n",
                    catalog.name(*e),
                    catalog.name(*target),
                    catalog.name(*a)
                ));
            }
        }
        out
    }
}

pub fn pn_observe(store: &mut PlanNetworkStore, goal: Goal, solution: &Solution) {
    store.observe(goal, solution);
}

impl KnowledgeSource for PlanNetworkStore {
    fn name(&self) -> &str {
        "pn"
    }

    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        ranked(self.locations.get(&object))
            .into_iter()
            .filter(|s| env.location(*s).is_some())
            .take(limit)
            .collect()
    }

    fn objects_for(&self, action: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        ranked(self.objects.get(&(action, target))).into_iter().take(limit).collect()
    }

    fn actions_for(&self, effect: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        ranked(self.actions.get(&(effect, target))).into_iter().take(limit).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::default_catalog;
    use crate::world::empty_environment;

    #[test]
    fn fresh_store_answers_nothing_then_learns() {
        let c = default_catalog();
        let id = |n: &str| c.lookup(n).unwrap();
        let mut store = PlanNetworkStore::new();
        let mut env = crate::world::WorldState::new();
        let sink = LocationSlot::new(id("sink"), id("kitchen"));
        env.add_location(sink);
        assert!(store.locations_for(id("sponge"), &env, 12).is_empty());
        assert!(store.objects_for(id("wipe"), id("plate"), id("rag"), 8).is_empty());
        let goal = Goal { effect: id("clean"), target: id("plate") };
        pn_observe(
            &mut store,
            goal,
            &Solution { action: id("wipe"), object: id("sponge"), location: sink },
        );
        assert_eq!(store.locations_for(id("sponge"), &env, 12), vec![sink]);
        assert_eq!(store.objects_for(id("wipe"), id("plate"), id("rag"), 8), vec![id("sponge")]);
        assert_eq!(store.actions_for(id("clean"), id("plate"), id("scrub"), 4), vec![id("wipe")]);
        // Slots absent from the environment are never proposed.
        assert!(store.locations_for(id("sponge"), &empty_environment(&crate::kg::GroundTruth::new(c.clone(), vec![]).unwrap()), 12).is_empty());
        assert!(store.to_tsv(&c).contains("location\tsponge\tsink@kitchen\t1"));
    }
}

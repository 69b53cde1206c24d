use super::KnowledgeSource;
use crate::kg::{EntityId, GroundTruth, Relation};
use crate::world::{plausible, LocationSlot, WorldState};

/// Answers every query with exactly the true candidates, lowest id first.
pub struct GroundTruthSource<'a> {
    gt: &'a GroundTruth,
}

impl<'a> GroundTruthSource<'a> {
    pub fn new(gt: &'a GroundTruth) -> Self {
        Self { gt }
    }
}

impl KnowledgeSource for GroundTruthSource<'_> {
    fn name(&self) -> &str {
        "truth"
    }

    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        env.locations()
            .iter()
            .filter(|l| plausible(self.gt, object, l.slot))
            .map(|l| l.slot)
            .take(limit)
            .collect()
    }

    fn objects_for(&self, action: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        self.gt
            .heads(Relation::ObjUsedTo, action)
            .iter()
            .filter(|o| **o != target && self.gt.holds(**o, Relation::OperatesOn, target))
            .copied()
            .take(limit)
            .collect()
    }

    fn actions_for(&self, effect: EntityId, target: EntityId, _failed: EntityId, limit: usize) -> Vec<EntityId> {
        self.gt
            .heads(Relation::HasEffect, effect)
            .iter()
            .filter(|v| self.gt.holds(target, Relation::ObjCanBe, **v))
            .copied()
            .take(limit)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::fixture::kitchen;

    #[test]
    fn answers_exactly_the_true_candidates() {
        let k = kitchen();
        let t = GroundTruthSource::new(&k.gt);
        let env = &k.demo.world;
        assert_eq!(
            t.locations_for(k.id("sponge"), env, 10),
            vec![k.slot("sink", "kitchen"), k.slot("sink", "bathroom"), k.slot("cabinet", "kitchen")]
        );
        assert_eq!(t.locations_for(k.id("sponge"), env, 1).len(), 1);
        assert_eq!(t.objects_for(k.id("scrub"), k.id("plate"), k.id("sponge"), 10), vec![k.id("sponge"), k.id("brush")]);
        assert_eq!(t.actions_for(k.id("clean"), k.id("plate"), k.id("wipe"), 10), vec![k.id("wipe"), k.id("scrub")]);
        assert!(t.actions_for(k.id("dirty"), k.id("plate"), k.id("wipe"), 10).is_empty());
    }
}

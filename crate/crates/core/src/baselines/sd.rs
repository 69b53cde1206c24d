use crate::kg::EntityId;
use crate::taskgen::KnowledgeSource;
use crate::world::{LocationSlot, WorldState};

/// Single demonstration: no knowledge at all, so only the demo itself can
/// ever run.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingleDemo;

pub fn sd_source() -> SingleDemo {
    SingleDemo
}

impl KnowledgeSource for SingleDemo {
    fn name(&self) -> &str {
        "sd"
    }

    fn locations_for(&self, _: EntityId, _: &WorldState, _: usize) -> Vec<LocationSlot> {
        Vec::new()
    }

    fn objects_for(&self, _: EntityId, _: EntityId, _: EntityId, _: usize) -> Vec<EntityId> {
        Vec::new()
    }

    fn actions_for(&self, _: EntityId, _: EntityId, _: EntityId, _: usize) -> Vec<EntityId> {
        Vec::new()
    }
}

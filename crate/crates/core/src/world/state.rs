use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::WorldError;
use crate::kg::{Catalog, EntityId, EntityKind};

/// A location class in a particular room. Plans name locations this way, so
/// a plan written for one environment can be replayed in another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocationSlot {
    pub class: EntityId,
    pub room: EntityId,
}

impl LocationSlot {
    pub fn new(class: EntityId, room: EntityId) -> Self {
        Self { class, room }
    }

    pub fn describe(&self, catalog: &Catalog) -> String {
        format!("{}@{}", catalog.name(self.class), catalog.name(self.room))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjId(pub u32);

impl fmt::Display for LocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationInstance {
    pub id: LocId,
    pub slot: LocationSlot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectInstance {
    pub id: ObjId,
    pub class: EntityId,
    pub placement: LocId,
    pub states: BTreeSet<EntityId>,
}

/// Rooms, location instances and placed objects. Ids are never reused, so
/// removing an object leaves the other ids stable.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WorldState {
    rooms: BTreeSet<EntityId>,
    locations: Vec<LocationInstance>,
    objects: Vec<ObjectInstance>,
    next_object: u32,
}

impl WorldState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_location(&mut self, slot: LocationSlot) -> LocId {
        if let Some(id) = self.location(slot) {
            return id;
        }
        self.rooms.insert(slot.room);
        let id = LocId(self.locations.len() as u32);
        self.locations.push(LocationInstance { id, slot });
        id
    }

    pub fn add_object(
        &mut self,
        class: EntityId,
        placement: LocId,
        states: BTreeSet<EntityId>,
    ) -> Result<ObjId, WorldError> {
        if placement.0 as usize >= self.locations.len() {
            return Err(WorldError::UnknownLocation(placement));
        }
        let id = ObjId(self.next_object);
        self.next_object += 1;
        self.objects.push(ObjectInstance {
            id,
            class,
            placement,
            states,
        });
        Ok(id)
    }

    pub fn remove_object(&mut self, id: ObjId) -> Option<ObjectInstance> {
        let i = self.objects.iter().position(|o| o.id == id)?;
        Some(self.objects.remove(i))
    }

    pub fn move_object(&mut self, id: ObjId, to: LocId) -> Result<(), WorldError> {
        if to.0 as usize >= self.locations.len() {
            return Err(WorldError::UnknownLocation(to));
        }
        let o = self
            .objects
            .iter_mut()
            .find(|o| o.id == id)
            .ok_or(WorldError::UnknownObject(id))?;
        o.placement = to;
        Ok(())
    }

    pub fn rooms(&self) -> &BTreeSet<EntityId> {
        &self.rooms
    }

    pub fn locations(&self) -> &[LocationInstance] {
        &self.locations
    }

    pub fn objects(&self) -> &[ObjectInstance] {
        &self.objects
    }

    pub fn location(&self, slot: LocationSlot) -> Option<LocId> {
        self.locations.iter().find(|l| l.slot == slot).map(|l| l.id)
    }

    pub fn slot(&self, id: LocId) -> LocationSlot {
        self.locations[id.0 as usize].slot
    }

    pub fn object(&self, id: ObjId) -> Option<&ObjectInstance> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub(crate) fn object_mut(&mut self, id: ObjId) -> Option<&mut ObjectInstance> {
        self.objects.iter_mut().find(|o| o.id == id)
    }

    /// Instances of `class`, lowest id first.
    pub fn instances_of(&self, class: EntityId) -> Vec<&ObjectInstance> {
        self.objects.iter().filter(|o| o.class == class).collect()
    }

    pub fn find_at(&self, class: EntityId, at: LocId) -> Option<&ObjectInstance> {
        self.objects
            .iter()
            .find(|o| o.class == class && o.placement == at)
    }

    /// Canonical text form, one instance per line.
    pub fn snapshot(&self, catalog: &Catalog) -> String {
        let mut out = String::from("world 1\n");
        for r in &self.rooms {
            out.push_str(&format!("room {}\n", catalog.name(*r)));
        }
        for l in &self.locations {
            out.push_str(&format!(
                "loc {} {} {}\n",
                l.id.0,
                catalog.name(l.slot.class),
                catalog.name(l.slot.room)
            ));
        }
        for o in &self.objects {
            let states: Vec<&str> = o.states.iter().map(|s| catalog.name(*s)).collect();
            let states = if states.is_empty() { "-".to_string() } else { states.join(",") };
            out.push_str(&format!(
                "obj {} {} {} {}\n",
                o.id.0,
                catalog.name(o.class),
                o.placement.0,
                states
            ));
        }
        out.push_str(&format!("next {}\n", self.next_object));
        out
    }

    pub fn from_snapshot(text: &str, catalog: &Catalog) -> Result<Self, WorldError> {
        let mut world = WorldState::new();
        let bad = |line: usize, reason: String| WorldError::Snapshot { line, reason };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "world 1")) => {}
            _ => return Err(bad(1, "expected `world 1` header".into())),
        }
        for (i, line) in lines {
            let n = i + 1;
            let cols: Vec<&str> = line.split(' ').collect();
            let entity = |name: &str, kind: EntityKind| {
                catalog
                    .lookup(name)
                    .filter(|id| catalog.kind(*id) == kind)
                    .ok_or_else(|| bad(n, format!("`{name}` is not a known {kind}")))
            };
            let number = |s: &str| s.parse::<u32>().map_err(|_| bad(n, format!("bad id `{s}`")));
            match cols.as_slice() {
                ["room", name] => {
                    world.rooms.insert(entity(name, EntityKind::Room)?);
                }
                ["loc", id, class, room] => {
                    let slot = LocationSlot::new(
                        entity(class, EntityKind::Location)?,
                        entity(room, EntityKind::Room)?,
                    );
                    if number(id)? as usize != world.locations.len() || world.location(slot).is_some() {
                        return Err(bad(n, "location ids must be dense and slots unique".into()));
                    }
                    world.add_location(slot);
                }
                ["obj", id, class, at, states] => {
                    let id = number(id)?;
                    if id < world.next_object {
                        return Err(bad(n, "object ids must increase".into()));
                    }
                    let states = if *states == "-" {
                        BTreeSet::new()
                    } else {
                        states
                            .split(',')
                            .map(|s| entity(s, EntityKind::State))
                            .collect::<Result<_, _>>()?
                    };
                    world.next_object = id;
                    world
                        .add_object(entity(class, EntityKind::Object)?, LocId(number(at)?), states)
                        .map_err(|e| bad(n, e.to_string()))?;
                }
                ["next", id] => {
                    let id = number(id)?;
                    if id < world.next_object {
                        return Err(bad(n, "next id below an existing object".into()));
                    }
                    world.next_object = id;
                }
                _ => return Err(bad(n, format!("unrecognised line `{line}`"))),
            }
        }
        Ok(world)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::fixture::kitchen;

    #[test]
    fn snapshot_round_trips() {
        let k = kitchen();
        let c = k.gt.catalog();
        let text = k.demo.world.snapshot(c);
        assert!(text.starts_with("world 1\n"));
        let back = WorldState::from_snapshot(&text, c).unwrap();
        assert_eq!(back, k.demo.world);
        assert_eq!(back.snapshot(c), text);
    }

    #[test]
    fn snapshot_errors_carry_line_numbers() {
        let k = kitchen();
        let c = k.gt.catalog();
        assert!(matches!(WorldState::from_snapshot("world 2\n", c), Err(WorldError::Snapshot { line: 1, .. })));
        let text = "world 1\nloc 0 sink kitchen\nobj 0 sink 0 -\n";
        assert!(matches!(WorldState::from_snapshot(text, c), Err(WorldError::Snapshot { line: 3, .. })));
    }

    #[test]
    fn ids_stay_stable() {
        let k = kitchen();
        let mut w = k.demo.world.clone();
        let sink = k.slot("sink", "kitchen");
        assert_eq!(w.add_location(sink), w.location(sink).unwrap());
        assert_eq!(w.locations().len(), 4);
        let first = w.objects()[0].id;
        let second = w.objects()[1].id;
        w.remove_object(first).unwrap();
        assert_eq!(w.objects()[0].id, second);
        let fresh = w.add_object(k.id("rag"), LocId(2), BTreeSet::new()).unwrap();
        assert!(fresh > second);
        assert!(matches!(w.add_object(k.id("rag"), LocId(9), BTreeSet::new()), Err(WorldError::UnknownLocation(_))));
        w.move_object(fresh, LocId(0)).unwrap();
        assert_eq!(w.find_at(k.id("rag"), LocId(0)).unwrap().id, fresh);
        assert!(w.move_object(ObjId(77), LocId(0)).is_err());
    }
}

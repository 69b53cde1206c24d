//! A six-location kitchen used by unit tests across modules.

use crate::kg::{Catalog, EntityId, EntityKind, GroundTruth, Relation, TripleKey};

use super::{Demo, Goal, LocationSlot, PrimitiveAction, TaskPlan, WorldState};

pub(crate) struct Kitchen {
    pub gt: GroundTruth,
    pub demo: Demo,
}

impl Kitchen {
    pub fn id(&self, name: &str) -> EntityId {
        self.gt.catalog().lookup(name).unwrap()
    }

    pub fn slot(&self, class: &str, room: &str) -> LocationSlot {
        LocationSlot::new(self.id(class), self.id(room))
    }
}

pub(crate) fn kitchen() -> Kitchen {
    let mut c = Catalog::new();
    for (names, kind) in [
        (&["kitchen", "bathroom"][..], EntityKind::Room),
        (&["sink", "cabinet", "counter"][..], EntityKind::Location),
        (&["sponge", "rag", "brush", "plate"][..], EntityKind::Object),
        (&["wipe", "scrub"][..], EntityKind::Action),
        (&["clean", "dirty"][..], EntityKind::State),
    ] {
        for n in names {
            c.add(n, kind).unwrap();
        }
    }
    let rows = [
        ("sink", Relation::LocInRoom, "kitchen"),
        ("sink", Relation::LocInRoom, "bathroom"),
        ("cabinet", Relation::LocInRoom, "kitchen"),
        ("counter", Relation::LocInRoom, "kitchen"),
        ("sponge", Relation::ObjInLoc, "sink"),
        ("sponge", Relation::ObjInLoc, "cabinet"),
        ("rag", Relation::ObjInLoc, "cabinet"),
        ("rag", Relation::ObjOnLoc, "counter"),
        ("brush", Relation::ObjInLoc, "sink"),
        ("plate", Relation::ObjOnLoc, "counter"),
        ("sponge", Relation::ObjUsedTo, "wipe"),
        ("sponge", Relation::ObjUsedTo, "scrub"),
        ("rag", Relation::ObjUsedTo, "wipe"),
        ("brush", Relation::ObjUsedTo, "scrub"),
        ("sponge", Relation::OperatesOn, "plate"),
        ("rag", Relation::OperatesOn, "plate"),
        ("brush", Relation::OperatesOn, "plate"),
        ("plate", Relation::ObjCanBe, "wipe"),
        ("plate", Relation::ObjCanBe, "scrub"),
        ("wipe", Relation::HasEffect, "clean"),
        ("scrub", Relation::HasEffect, "clean"),
        ("clean", Relation::InverseStateOf, "dirty"),
        ("dirty", Relation::InverseStateOf, "clean"),
    ];
    let id = |n: &str| c.lookup(n).unwrap();
    let keys = rows.iter().map(|(h, r, t)| TripleKey::new(id(h), *r, id(t))).collect();
    let (sink, counter) = (
        LocationSlot::new(id("sink"), id("kitchen")),
        LocationSlot::new(id("counter"), id("kitchen")),
    );
    let mut world = WorldState::new();
    let at_sink = world.add_location(sink);
    world.add_location(LocationSlot::new(id("sink"), id("bathroom")));
    world.add_location(LocationSlot::new(id("cabinet"), id("kitchen")));
    let at_counter = world.add_location(counter);
    world.add_object(id("sponge"), at_sink, Default::default()).unwrap();
    world
        .add_object(id("plate"), at_counter, [id("dirty")].into_iter().collect())
        .unwrap();
    let goal = Goal {
        effect: id("clean"),
        target: id("plate"),
    };
    let plan = TaskPlan::demo(vec![PrimitiveAction {
        verb: id("wipe"),
        tool: id("sponge"),
        source: sink,
        target: goal.target,
        effect: goal.effect,
    }]);
    let demo = Demo {
        world,
        plan,
        goal,
        action: id("wipe"),
        object: id("sponge"),
        location: sink,
    };
    Kitchen {
        gt: GroundTruth::new(c, keys).unwrap(),
        demo,
    }
}

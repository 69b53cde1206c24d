//! Demo construction, perturbation and the exhaustive solution oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::plan::{applicable, execute, Goal, PrimitiveAction, TaskPlan};
use super::{LocId, LocationSlot, WorldError, WorldState};
use crate::kg::{vocab, EntityId, EntityKind, GroundTruth, Relation};
use crate::rng::stream;

/// Non-solution objects scattered through every environment.
pub const DISTRACTORS: usize = 24;
/// Sub-seed retries before a perturbation is declared unsatisfiable.
pub const PERTURB_RETRIES: u64 = 100;
const DEMO_CANDIDATES: usize = 400;

/// Which of action, object and location differ from the demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Demo,
    L,
    O,
    OL,
    A,
    AL,
    AO,
    AOL,
}

impl Level {
    pub fn of(action: bool, object: bool, location: bool) -> Level {
        match (action, object, location) {
            (false, false, false) => Level::Demo,
            (false, false, true) => Level::L,
            (false, true, false) => Level::O,
            (false, true, true) => Level::OL,
            (true, false, false) => Level::A,
            (true, false, true) => Level::AL,
            (true, true, false) => Level::AO,
            (true, true, true) => Level::AOL,
        }
    }

    pub fn action(self) -> bool {
        matches!(self, Level::A | Level::AL | Level::AO | Level::AOL)
    }

    pub fn object(self) -> bool {
        matches!(self, Level::O | Level::OL | Level::AO | Level::AOL)
    }

    pub fn location(self) -> bool {
        matches!(self, Level::L | Level::OL | Level::AL | Level::AOL)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PerturbationType {
    L,
    O,
    OL,
    AO,
    AOL,
    Random,
}

impl PerturbationType {
    pub const STRUCTURED: [PerturbationType; 5] = [
        PerturbationType::L,
        PerturbationType::O,
        PerturbationType::OL,
        PerturbationType::AO,
        PerturbationType::AOL,
    ];

    pub const ALL: [PerturbationType; 6] = [
        PerturbationType::L,
        PerturbationType::O,
        PerturbationType::OL,
        PerturbationType::AO,
        PerturbationType::AOL,
        PerturbationType::Random,
    ];

    pub fn level(self) -> Option<Level> {
        match self {
            PerturbationType::L => Some(Level::L),
            PerturbationType::O => Some(Level::O),
            PerturbationType::OL => Some(Level::OL),
            PerturbationType::AO => Some(Level::AO),
            PerturbationType::AOL => Some(Level::AOL),
            PerturbationType::Random => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PerturbationType::L => "L",
            PerturbationType::O => "O",
            PerturbationType::OL => "OL",
            PerturbationType::AO => "AO",
            PerturbationType::AOL => "AOL",
            PerturbationType::Random => "Random",
        }
    }
}

impl fmt::Display for PerturbationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationType {
    type Err = WorldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PerturbationType::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| WorldError::UnknownPerturbation(s.to_string()))
    }
}

/// One way to reach the goal: `action` with a tool of class `object`
/// picked up at `location`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub action: EntityId,
    pub object: EntityId,
    pub location: LocationSlot,
}

/// A demonstration: environment, plan, and the `(a_d, o_d, l_d)` it uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demo {
    pub world: WorldState,
    pub plan: TaskPlan,
    pub goal: Goal,
    pub action: EntityId,
    pub object: EntityId,
    pub location: LocationSlot,
}

impl Demo {
    pub fn level_of(&self, s: &Solution) -> Level {
        Level::of(s.action != self.action, s.object != self.object, s.location != self.location)
    }
}

/// Every `LocInRoom` pair, sorted.
pub fn location_slots(gt: &GroundTruth) -> Vec<LocationSlot> {
    gt.triples()
        .iter()
        .filter(|k| k.relation == Relation::LocInRoom)
        .map(|k| LocationSlot::new(k.head, k.tail))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// An environment holding one instance of every location slot and no objects.
pub fn empty_environment(gt: &GroundTruth) -> WorldState {
    let mut w = WorldState::new();
    for s in location_slots(gt) {
        w.add_location(s);
    }
    w
}

/// `class` may sit at `slot`: in or on the location class, and the location
/// belongs to the room.
pub fn plausible(gt: &GroundTruth, class: EntityId, slot: LocationSlot) -> bool {
    (gt.holds(class, Relation::ObjInLoc, slot.class) || gt.holds(class, Relation::ObjOnLoc, slot.class))
        && gt.holds(slot.class, Relation::LocInRoom, slot.room)
}

fn plausible_slots(gt: &GroundTruth, world: &WorldState, class: EntityId) -> Vec<LocId> {
    world
        .locations()
        .iter()
        .filter(|l| plausible(gt, class, l.slot))
        .map(|l| l.id)
        .collect()
}

pub fn check_plausibility(world: &WorldState, gt: &GroundTruth) -> Result<(), WorldError> {
    for l in world.locations() {
        if !gt.holds(l.slot.class, Relation::LocInRoom, l.slot.room) {
            return Err(WorldError::Implausible(format!("location instance {}", l.id)));
        }
    }
    for o in world.objects() {
        if !plausible(gt, o.class, world.slot(o.placement)) {
            return Err(WorldError::Implausible(format!("object instance {}", o.id)));
        }
    }
    Ok(())
}

/// `(action, tool)` pairs that reach the goal, sorted.
pub fn solution_pairs(gt: &GroundTruth, goal: Goal) -> Vec<(EntityId, EntityId)> {
    let mut out = Vec::new();
    for &a in gt.heads(Relation::HasEffect, goal.effect) {
        if !gt.holds(goal.target, Relation::ObjCanBe, a) {
            continue;
        }
        for &o in gt.heads(Relation::ObjUsedTo, a) {
            if o != goal.target && applicable(gt, a, o, goal.target, goal.effect) {
                out.push((a, o));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Exhaustive enumeration of `(action, tool class, location)` that solve the
/// goal in `world`, sorted.
pub fn oracle_solutions(world: &WorldState, goal: Goal, gt: &GroundTruth) -> Vec<Solution> {
    if world.instances_of(goal.target).is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Solution> = solution_pairs(gt, goal)
        .into_iter()
        .flat_map(|(a, o)| {
            world.instances_of(o).into_iter().map(move |i| (a, o, i.placement))
        })
        .map(|(action, object, at)| Solution {
            action,
            object,
            location: world.slot(at),
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn actions_by_tool(pairs: &[(EntityId, EntityId)]) -> BTreeMap<EntityId, BTreeSet<EntityId>> {
    let mut m: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
    for (a, o) in pairs {
        m.entry(*o).or_default().insert(*a);
    }
    m
}

fn target_states(gt: &GroundTruth, goal: Goal) -> BTreeSet<EntityId> {
    gt.tails(goal.effect, Relation::InverseStateOf)
        .iter()
        .filter(|s| gt.holds(goal.target, Relation::ObjHasState, **s))
        .copied()
        .collect()
}

struct Candidate {
    goal: Goal,
    action: EntityId,
    object: EntityId,
    slot: LocationSlot,
}

fn demo_candidates(gt: &GroundTruth, base: &WorldState) -> Vec<Candidate> {
    let catalog = gt.catalog();
    let mut out = Vec::new();
    for a in catalog.of_kind(EntityKind::Action) {
        for &effect in gt.tails(a, Relation::HasEffect) {
            for &target in gt.heads(Relation::ObjCanBe, a) {
                if plausible_slots(gt, base, target).is_empty() {
                    continue;
                }
                let goal = Goal { effect, target };
                let pairs = solution_pairs(gt, goal);
                let by_tool = actions_by_tool(&pairs);
                for (tool, acts) in &by_tool {
                    if acts.len() != 1 || !acts.contains(&a) {
                        continue;
                    }
                    for l in plausible_slots(gt, base, *tool) {
                        out.push(Candidate {
                            goal,
                            action: a,
                            object: *tool,
                            slot: base.slot(l),
                        });
                    }
                }
            }
        }
    }
    out
}

fn demo_world<R: Rng>(gt: &GroundTruth, c: &Candidate, rng: &mut R) -> Option<WorldState> {
    let mut world = empty_environment(gt);
    let target_at = *plausible_slots(gt, &world, c.goal.target).choose(rng)?;
    world
        .add_object(c.goal.target, target_at, target_states(gt, c.goal))
        .ok()?;
    let at = world.location(c.slot)?;
    world.add_object(c.object, at, BTreeSet::new()).ok()?;

    let tools: BTreeSet<EntityId> = solution_pairs(gt, c.goal).into_iter().map(|(_, o)| o).collect();
    let mut pool: Vec<(EntityId, Vec<LocId>)> = gt
        .catalog()
        .of_kind(EntityKind::Object)
        .into_iter()
        .filter(|o| *o != c.goal.target && !tools.contains(o))
        .map(|o| (o, plausible_slots(gt, &world, o)))
        .filter(|(_, slots)| !slots.is_empty())
        .collect();
    pool.shuffle(rng);
    for (o, slots) in pool.into_iter().take(DISTRACTORS) {
        let at = *slots.choose(rng).expect("non-empty");
        world.add_object(o, at, BTreeSet::new()).ok()?;
    }
    Some(world)
}

/// Picks a demonstration whose environment admits every structured
/// perturbation. Cleaning tasks are preferred when the graph has any.
pub fn build_demo(gt: &GroundTruth, seed: u64) -> Result<Demo, WorldError> {
    let base = empty_environment(gt);
    let mut rng = stream(seed, &[0xde70]);
    let mut candidates = demo_candidates(gt, &base);
    if candidates.is_empty() {
        return Err(WorldError::NoFeasibleDemo);
    }
    candidates.shuffle(&mut rng);
    let clean = gt.catalog().lookup(vocab::CLEAN);
    candidates.sort_by_key(|c| Some(c.goal.effect) != clean);

    for (i, c) in candidates.iter().take(DEMO_CANDIDATES).enumerate() {
        let mut wrng = stream(seed, &[0xde71, i as u64]);
        let Some(world) = demo_world(gt, c, &mut wrng) else {
            continue;
        };
        let plan = TaskPlan::demo(vec![PrimitiveAction {
            verb: c.action,
            tool: c.object,
            source: c.slot,
            target: c.goal.target,
            effect: c.goal.effect,
        }]);
        let demo = Demo {
            world,
            plan,
            goal: c.goal,
            action: c.action,
            object: c.object,
            location: c.slot,
        };
        let mut probe = demo.world.clone();
        if !execute(&demo.plan, &mut probe, gt)?.is_success() {
            continue;
        }
        if oracle_solutions(&demo.world, demo.goal, gt).len() != 1 {
            continue;
        }
        let feasible = PerturbationType::STRUCTURED
            .iter()
            .all(|p| perturb(&demo, *p, gt, seed).is_ok());
        if feasible {
            return Ok(demo);
        }
    }
    Err(WorldError::NoFeasibleDemo)
}

fn pick_slot<R: Rng>(
    gt: &GroundTruth,
    world: &WorldState,
    class: EntityId,
    avoid: LocationSlot,
    rng: &mut R,
) -> Option<LocId> {
    let slots: Vec<LocId> = plausible_slots(gt, world, class)
        .into_iter()
        .filter(|l| world.slot(*l) != avoid)
        .collect();
    slots.choose(rng).copied()
}

fn unsatisfiable(demo: &Demo, ptype: PerturbationType, why: &str) -> WorldError {
    WorldError::UnsatisfiablePerturbation(format!("{ptype}: {why} (demo action {})", demo.action))
}

/// One perturbation draw. `Err` means no draw can ever succeed; `Ok(None)`
/// means this draw failed and another sub-seed may do better.
fn draw<R: Rng>(
    demo: &Demo,
    ptype: PerturbationType,
    gt: &GroundTruth,
    rng: &mut R,
) -> Result<Option<WorldState>, WorldError> {
    let mut world = demo.world.clone();
    let at = world.location(demo.location).ok_or(WorldError::NoFeasibleDemo)?;
    let tool = world
        .find_at(demo.object, at)
        .map(|o| o.id)
        .ok_or(WorldError::NoFeasibleDemo)?;
    world.remove_object(tool);

    let pairs = solution_pairs(gt, demo.goal);
    let by_tool = actions_by_tool(&pairs);
    let target = demo.goal.target;
    let single = |o: &EntityId, a: EntityId| by_tool.get(o).is_some_and(|s| s.len() == 1 && s.contains(&a));

    let (class, placement) = match ptype {
        PerturbationType::L => {
            let Some(l) = pick_slot(gt, &world, demo.object, demo.location, rng) else {
                return Err(unsatisfiable(demo, ptype, "the tool has no other plausible location"));
            };
            (demo.object, l)
        }
        PerturbationType::O | PerturbationType::OL => {
            let here = ptype == PerturbationType::O;
            let pool: Vec<EntityId> = by_tool
                .keys()
                .filter(|o| **o != demo.object && **o != target && single(o, demo.action))
                .filter(|o| {
                    if here {
                        plausible(gt, **o, demo.location)
                    } else {
                        plausible_slots(gt, &world, **o).iter().any(|l| world.slot(*l) != demo.location)
                    }
                })
                .copied()
                .collect();
            let Some(&o) = pool.choose(rng) else {
                return Err(unsatisfiable(demo, ptype, "no substitute object for the demo action"));
            };
            let l = if here { at } else { pick_slot(gt, &world, o, demo.location, rng).expect("filtered") };
            (o, l)
        }
        PerturbationType::AO | PerturbationType::AOL => {
            let here = ptype == PerturbationType::AO;
            let usable: Vec<_> = world
                .objects()
                .iter()
                .filter(|o| gt.holds(o.class, Relation::ObjUsedTo, demo.action))
                .map(|o| o.id)
                .collect();
            for id in usable {
                world.remove_object(id);
            }
            let pool: Vec<EntityId> = pairs
                .iter()
                .filter(|(a, o)| {
                    *a != demo.action
                        && *o != target
                        && !gt.holds(*o, Relation::ObjUsedTo, demo.action)
                        && single(o, *a)
                })
                .map(|(_, o)| *o)
                .filter(|o| {
                    if here {
                        plausible(gt, *o, demo.location)
                    } else {
                        plausible_slots(gt, &world, *o).iter().any(|l| world.slot(*l) != demo.location)
                    }
                })
                .collect();
            let Some(&o) = pool.choose(rng) else {
                return Err(unsatisfiable(demo, ptype, "no object for another action with the same effect"));
            };
            let l = if here { at } else { pick_slot(gt, &world, o, demo.location, rng).expect("filtered") };
            (o, l)
        }
        PerturbationType::Random => unreachable!("resolved by caller"),
    };
    world.add_object(class, placement, BTreeSet::new())?;

    let solutions = oracle_solutions(&world, demo.goal, gt);
    let ok = solutions.len() == 1
        && Some(demo.level_of(&solutions[0])) == ptype.level()
        && check_plausibility(&world, gt).is_ok();
    Ok(ok.then_some(world))
}

/// An execution environment derived from the demo with exactly one valid
/// solution at the level `ptype` names. `Random` draws the level uniformly.
pub fn perturb(
    demo: &Demo,
    ptype: PerturbationType,
    gt: &GroundTruth,
    seed: u64,
) -> Result<WorldState, WorldError> {
    if ptype == PerturbationType::Random {
        let (resolved, world) = perturb_random(demo, gt, seed)?;
        log::trace!("random perturbation resolved to {resolved}");
        return Ok(world);
    }
    for attempt in 0..PERTURB_RETRIES {
        let mut rng = stream(seed, &[0x9e77, ptype as u64, attempt]);
        if let Some(world) = draw(demo, ptype, gt, &mut rng)? {
            return Ok(world);
        }
    }
    Err(unsatisfiable(demo, ptype, "no unique-solution environment within the retry budget"))
}

/// `Random` perturbation, also reporting the structured type it resolved to.
/// An unsatisfiable draw is redrawn among the remaining types.
pub fn perturb_random(
    demo: &Demo,
    gt: &GroundTruth,
    seed: u64,
) -> Result<(PerturbationType, WorldState), WorldError> {
    let mut order = PerturbationType::STRUCTURED.to_vec();
    order.shuffle(&mut stream(seed, &[0x9e78]));
    let mut last = None;
    for p in order {
        match perturb(demo, p, gt, seed) {
            Ok(w) => return Ok((p, w)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("five types tried"))
}

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{LocationSlot, WorldError, WorldState};
use crate::kg::{Catalog, EntityId, EntityKind, GroundTruth, Relation};

/// `verb(tool, source)` applied to `target`, written a(o, l) in plan
/// notation. Executes as navigate, acquire, apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimitiveAction {
    pub verb: EntityId,
    pub tool: EntityId,
    pub source: LocationSlot,
    pub target: EntityId,
    /// State the step is meant to bring about.
    pub effect: EntityId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Navigate,
    Acquire,
    Apply,
}

pub const STEPS_PER_ACTION: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub effect: EntityId,
    pub target: EntityId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskPlan {
    pub actions: Vec<PrimitiveAction>,
    pub demo: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Substitution {
    Location(LocationSlot, LocationSlot),
    Object(EntityId, EntityId),
    Action(EntityId, EntityId),
}

impl TaskPlan {
    pub fn demo(actions: Vec<PrimitiveAction>) -> Self {
        Self {
            actions,
            demo: true,
        }
    }

    /// Rewrites every mention of the substituted variable; the result is a
    /// generalized plan.
    pub fn replace(&self, sub: Substitution) -> TaskPlan {
        let mut out = self.clone();
        out.demo = false;
        for a in &mut out.actions {
            match sub {
                Substitution::Location(from, to) if a.source == from => a.source = to,
                Substitution::Object(from, to) if a.tool == from => a.tool = to,
                Substitution::Action(from, to) if a.verb == from => a.verb = to,
                _ => {}
            }
        }
        out
    }

    pub fn mentions(&self, sub: Substitution) -> bool {
        self.actions.iter().any(|a| match sub {
            Substitution::Location(from, _) => a.source == from,
            Substitution::Object(from, _) => a.tool == from,
            Substitution::Action(from, _) => a.verb == from,
        })
    }

    pub fn describe(&self, catalog: &Catalog) -> String {
        self.actions
            .iter()
            .map(|a| {
                format!(
                    "{}({}, {}) on {} -> {}",
                    catalog.name(a.verb),
                    catalog.name(a.tool),
                    a.source.describe(catalog),
                    catalog.name(a.target),
                    catalog.name(a.effect)
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// First 16 hex digits of a SHA-256 over the plan's entity ids.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for a in &self.actions {
            h.update(format!(
                "{} {} {} {} {} {};",
                a.verb.0, a.tool.0, a.source.class.0, a.source.room.0, a.target.0, a.effect.0
            ));
        }
        hex::encode(h.finalize())[..16].to_string()
    }
}

/// The location, object and action of the first step whose precondition
/// failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureContext {
    pub location: LocationSlot,
    pub object: EntityId,
    pub action: EntityId,
    pub step: usize,
    pub kind: StepKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Failure(FailureContext),
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }
}

fn check_plan(plan: &TaskPlan, gt: &GroundTruth) -> Result<(), WorldError> {
    if plan.actions.is_empty() {
        return Err(WorldError::MalformedPlan("plan has no steps".into()));
    }
    let c = gt.catalog();
    for a in &plan.actions {
        let expect = [
            (a.verb, EntityKind::Action),
            (a.tool, EntityKind::Object),
            (a.source.class, EntityKind::Location),
            (a.source.room, EntityKind::Room),
            (a.target, EntityKind::Object),
            (a.effect, EntityKind::State),
        ];
        for (id, kind) in expect {
            if c.get(id).map(|e| e.kind) != Some(kind) {
                return Err(WorldError::MalformedPlan(format!("{id} is not a {kind}")));
            }
        }
    }
    Ok(())
}

/// Preconditions of `verb` with `tool` on `target` towards `effect`, as the
/// ground truth licenses them.
pub fn applicable(gt: &GroundTruth, verb: EntityId, tool: EntityId, target: EntityId, effect: EntityId) -> bool {
    gt.holds(tool, Relation::ObjUsedTo, verb)
        && gt.holds(tool, Relation::OperatesOn, target)
        && gt.holds(target, Relation::ObjCanBe, verb)
        && gt.holds(verb, Relation::HasEffect, effect)
}

/// Runs the plan. On failure the world is left untouched; on success the
/// targets carry their new states and every tool is back where it was found.
pub fn execute(plan: &TaskPlan, world: &mut WorldState, gt: &GroundTruth) -> Result<Outcome, WorldError> {
    check_plan(plan, gt)?;
    let mut next = world.clone();
    for (i, a) in plan.actions.iter().enumerate() {
        let fail = |k: usize, kind| {
            Ok(Outcome::Failure(FailureContext {
                location: a.source,
                object: a.tool,
                action: a.verb,
                step: i * STEPS_PER_ACTION + k,
                kind,
            }))
        };
        let Some(at) = next.location(a.source) else {
            return fail(0, StepKind::Navigate);
        };
        let Some(tool) = next.find_at(a.tool, at).map(|o| o.id) else {
            return fail(1, StepKind::Acquire);
        };
        let target = next.instances_of(a.target).into_iter().map(|o| o.id).find(|id| *id != tool);
        let Some(target) = target.filter(|_| applicable(gt, a.verb, a.tool, a.target, a.effect)) else {
            return fail(2, StepKind::Apply);
        };
        let inverse = gt.tails(a.effect, Relation::InverseStateOf).to_vec();
        let obj = next.object_mut(target).expect("target instance");
        obj.states.retain(|s| !inverse.contains(s));
        obj.states.insert(a.effect);
    }
    *world = next;
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::fixture::kitchen;
    use crate::world::LocId;

    #[test]
    fn demo_executes_and_replaces_inverse_state() {
        let k = kitchen();
        let mut w = k.demo.world.clone();
        assert!(execute(&k.demo.plan, &mut w, &k.gt).unwrap().is_success());
        let plate = w.instances_of(k.id("plate"))[0];
        assert_eq!(plate.states, [k.id("clean")].into_iter().collect());
        let sponge = w.instances_of(k.id("sponge"))[0];
        assert_eq!(w.slot(sponge.placement), k.slot("sink", "kitchen"));
    }

    #[test]
    fn failures_name_the_first_broken_step() {
        let k = kitchen();
        let plan = &k.demo.plan;

        let mut w = k.demo.world.clone();
        let sponge = w.instances_of(k.id("sponge"))[0].id;
        let cabinet = w.location(k.slot("cabinet", "kitchen")).unwrap();
        w.move_object(sponge, cabinet).unwrap();
        let before = w.clone();
        let Outcome::Failure(f) = execute(plan, &mut w, &k.gt).unwrap() else { panic!() };
        assert_eq!((f.step, f.kind), (1, StepKind::Acquire));
        assert_eq!((f.location, f.object, f.action), (k.slot("sink", "kitchen"), k.id("sponge"), k.id("wipe")));
        assert_eq!(w, before);

        let nowhere = plan.replace(Substitution::Location(k.slot("sink", "kitchen"), k.slot("cabinet", "bathroom")));
        let Outcome::Failure(f) = execute(&nowhere, &mut k.demo.world.clone(), &k.gt).unwrap() else { panic!() };
        assert_eq!((f.step, f.kind), (0, StepKind::Navigate));

        // The sponge is present but rags cannot scrub, and the swap to
        // scrub with a sponge is fine.
        let scrub = plan.replace(Substitution::Action(k.id("wipe"), k.id("scrub")));
        assert!(execute(&scrub, &mut k.demo.world.clone(), &k.gt).unwrap().is_success());
        let mut w = k.demo.world.clone();
        w.add_object(k.id("rag"), LocId(0), Default::default()).unwrap();
        let rag_scrub = scrub.replace(Substitution::Object(k.id("sponge"), k.id("rag")));
        let Outcome::Failure(f) = execute(&rag_scrub, &mut w, &k.gt).unwrap() else { panic!() };
        assert_eq!((f.step, f.kind), (2, StepKind::Apply));
    }

    #[test]
    fn later_failure_rolls_back_earlier_effects() {
        let k = kitchen();
        let mut plan = k.demo.plan.clone();
        let mut second = plan.actions[0];
        second.tool = k.id("brush");
        plan.actions.push(second);
        let mut w = k.demo.world.clone();
        let Outcome::Failure(f) = execute(&plan, &mut w, &k.gt).unwrap() else { panic!() };
        assert_eq!(f.step, STEPS_PER_ACTION + 1);
        assert_eq!(w, k.demo.world);
    }

    #[test]
    fn replace_rewrites_every_mention() {
        let k = kitchen();
        let sub = Substitution::Object(k.id("sponge"), k.id("rag"));
        assert!(k.demo.plan.demo);
        assert!(k.demo.plan.mentions(sub));
        let p = k.demo.plan.replace(sub);
        assert!(!p.demo);
        assert_eq!(p.actions[0].tool, k.id("rag"));
        assert!(!p.mentions(sub));
        assert_ne!(p.hash(), k.demo.plan.hash());
        assert_eq!(p.hash(), k.demo.plan.replace(sub).hash());
        assert_eq!(p.hash().len(), 16);
        assert_eq!(p.describe(k.gt.catalog()), "wipe(rag, sink@kitchen) on plate -> clean");
    }

    #[test]
    fn ill_typed_plans_are_rejected() {
        let k = kitchen();
        let mut plan = k.demo.plan.clone();
        plan.actions[0].verb = k.id("rag");
        assert!(matches!(execute(&plan, &mut k.demo.world.clone(), &k.gt), Err(WorldError::MalformedPlan(_))));
        let empty = TaskPlan::demo(vec![]);
        assert!(execute(&empty, &mut k.demo.world.clone(), &k.gt).is_err());
    }

    #[test]
    fn applicability_needs_all_four_facts() {
        let k = kitchen();
        let id = |n| k.id(n);
        assert!(applicable(&k.gt, id("wipe"), id("rag"), id("plate"), id("clean")));
        assert!(!applicable(&k.gt, id("scrub"), id("rag"), id("plate"), id("clean")));
        assert!(!applicable(&k.gt, id("wipe"), id("rag"), id("plate"), id("dirty")));
        assert!(!applicable(&k.gt, id("wipe"), id("rag"), id("sponge"), id("clean")));
    }
}

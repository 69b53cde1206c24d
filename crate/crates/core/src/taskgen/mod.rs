//! Queue-driven incremental plan generalization over a pluggable knowledge
//! source.
//!
//! Each call to [`generalize_task`] emits at most one candidate plan. Three
//! queues persist across calls within an episode: locations for the current
//! object, objects for the current action, and actions with the demo's
//! effect. Location changes are tried before object changes, and object
//! changes before action changes.

mod kge_source;
mod truth;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::EntityId;
use crate::world::{FailureContext, Level, LocationSlot, Substitution, TaskPlan, WorldState, STEPS_PER_ACTION};

pub use kge_source::{kge_actions_for, kge_locations_for, kge_objects_for, KgeSource, CAN_BE_THRESHOLD};
pub use truth::GroundTruthSource;

/// Ranked answers for the three reasoning levels. Rankings are deterministic
/// and duplicate-free; `limit` bounds the length.
pub trait KnowledgeSource: Sync {
    fn name(&self) -> &str;

    /// Location slots of `env` where `object` is likely found.
    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot>;

    /// Object classes that can perform `action` on `target`. `failed` is the
    /// object the plan used before.
    fn objects_for(&self, action: EntityId, target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId>;

    /// Actions achieving `effect` that apply to `target`. `failed` is the
    /// action the plan used before.
    fn actions_for(&self, effect: EntityId, target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId>;
}

impl<K: KnowledgeSource + ?Sized> KnowledgeSource for &K {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        (**self).locations_for(object, env, limit)
    }

    fn objects_for(&self, action: EntityId, target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId> {
        (**self).objects_for(action, target, failed, limit)
    }

    fn actions_for(&self, effect: EntityId, target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId> {
        (**self).actions_for(effect, target, failed, limit)
    }
}

#[derive(Debug, Error)]
pub enum TaskgenError {
    #[error("invalid stage set: {0}")]
    InvalidStages(String),
    #[error("invalid queue capacities `{0}`")]
    InvalidCaps(String),
    #[error("failure step {0} is outside the plan")]
    StepOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueueCaps {
    pub locations: usize,
    pub objects: usize,
    pub actions: usize,
}

impl Default for QueueCaps {
    fn default() -> Self {
        Self::new(12, 8, 4)
    }
}

impl QueueCaps {
    pub fn new(locations: usize, objects: usize, actions: usize) -> Self {
        Self {
            locations,
            objects,
            actions,
        }
    }

    pub fn unbounded() -> Self {
        Self::new(usize::MAX, usize::MAX, usize::MAX)
    }

    /// `(cap_a + 1)(cap_o + 1) cap_l`, saturating.
    pub fn emission_bound(&self) -> usize {
        self.actions
            .saturating_add(1)
            .saturating_mul(self.objects.saturating_add(1))
            .saturating_mul(self.locations)
    }

    /// Every capacity at least as large as in `other`.
    pub fn dominates(&self, other: &QueueCaps) -> bool {
        self.locations >= other.locations && self.objects >= other.objects && self.actions >= other.actions
    }
}

impl fmt::Display for QueueCaps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.locations, self.objects, self.actions)
    }
}

impl FromStr for QueueCaps {
    type Err = TaskgenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| TaskgenError::InvalidCaps(s.to_string()))?;
        match parts.as_slice() {
            [l, o, a] if *l > 0 && *o > 0 && *a > 0 => Ok(QueueCaps::new(*l, *o, *a)),
            _ => Err(TaskgenError::InvalidCaps(s.to_string())),
        }
    }
}

/// Which reasoning levels are enabled. Action reasoning re-enters the object
/// stage, so it needs object reasoning too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stages {
    pub location: bool,
    pub object: bool,
    pub action: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        location: true,
        object: true,
        action: true,
    };

    /// The five ablations, in table order.
    pub const ABLATIONS: [Stages; 5] = [
        Stages::new(true, false, false),
        Stages::new(false, true, false),
        Stages::new(true, true, false),
        Stages::new(false, true, true),
        Stages::new(true, true, true),
    ];

    pub const fn new(location: bool, object: bool, action: bool) -> Self {
        Self {
            location,
            object,
            action,
        }
    }

    pub fn validate(&self) -> Result<(), TaskgenError> {
        if !(self.location || self.object || self.action) {
            return Err(TaskgenError::InvalidStages("no stage enabled".into()));
        }
        if self.action && !self.object {
            return Err(TaskgenError::InvalidStages(
                "action reasoning requires object reasoning".into(),
            ));
        }
        Ok(())
    }

    /// Whether these stages can produce a plan at `level`.
    pub fn covers(&self, level: Level) -> bool {
        (!level.location() || self.location) && (!level.object() || self.object) && (!level.action() || self.action)
    }

    pub fn name(&self) -> String {
        let mut s = String::new();
        if self.action {
            s.push('A');
        }
        if self.object {
            s.push('O');
        }
        if self.location {
            s.push('L');
        }
        s
    }
}

impl FromStr for Stages {
    type Err = TaskgenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        if up.is_empty() || up.chars().any(|c| !"AOL".contains(c)) {
            return Err(TaskgenError::InvalidStages(s.to_string()));
        }
        let st = Stages::new(up.contains('L'), up.contains('O'), up.contains('A'));
        st.validate()?;
        Ok(st)
    }
}

/// One emitted candidate plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub attempt: usize,
    pub level: Level,
    /// Substitutions applied in this emission, in order.
    pub substitutions: Vec<Substitution>,
    pub plan_hash: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Origin {
    action: EntityId,
    object: EntityId,
    location: LocationSlot,
}

/// Persistent queue state for one episode. `None` means the queue has not
/// been filled for the current variable; an empty queue is exhausted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenQueues {
    caps: QueueCaps,
    stages: Stages,
    l_subs: Option<VecDeque<LocationSlot>>,
    o_subs: Option<VecDeque<EntityId>>,
    a_subs: Option<VecDeque<EntityId>>,
    origin: Option<Origin>,
    trace: Vec<TraceEntry>,
}

impl GenQueues {
    pub fn new(caps: QueueCaps, stages: Stages) -> Result<Self, TaskgenError> {
        stages.validate()?;
        Ok(Self {
            caps,
            stages,
            l_subs: None,
            o_subs: None,
            a_subs: None,
            origin: None,
            trace: Vec::new(),
        })
    }

    pub fn caps(&self) -> QueueCaps {
        self.caps
    }

    pub fn stages(&self) -> Stages {
        self.stages
    }

    /// Clears every queue and the trace for a new episode.
    pub fn reset(&mut self) {
        self.l_subs = None;
        self.o_subs = None;
        self.a_subs = None;
        self.origin = None;
        self.trace.clear();
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn emissions(&self) -> usize {
        self.trace.len()
    }

    /// Pending lengths of the three queues (`None` if unfilled).
    pub fn pending(&self) -> (Option<usize>, Option<usize>, Option<usize>) {
        (
            self.l_subs.as_ref().map(VecDeque::len),
            self.o_subs.as_ref().map(VecDeque::len),
            self.a_subs.as_ref().map(VecDeque::len),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneralizationOutcome {
    Plan(TaskPlan),
    TaskFailure,
}

fn truncated<T: PartialEq>(items: Vec<T>, skip: Option<&T>, cap: usize) -> VecDeque<T> {
    let mut out = VecDeque::new();
    for x in items {
        if out.len() == cap {
            break;
        }
        if Some(&x) != skip && !out.contains(&x) {
            out.push_back(x);
        }
    }
    out
}

/// One step of the generalization algorithm: the next candidate plan for
/// the failure, or `TaskFailure` once every enabled queue is exhausted.
pub fn generalize_task<K: KnowledgeSource + ?Sized>(
    plan: &TaskPlan,
    failure: &FailureContext,
    state: &mut GenQueues,
    ks: &K,
    env: &WorldState,
) -> Result<GeneralizationOutcome, TaskgenError> {
    let step = plan
        .actions
        .get(failure.step / STEPS_PER_ACTION)
        .ok_or(TaskgenError::StepOutOfRange(failure.step))?;
    let (target, effect) = (step.target, step.effect);
    let origin = *state.origin.get_or_insert(Origin {
        action: failure.action,
        object: failure.object,
        location: failure.location,
    });
    let caps = state.caps;
    let stages = state.stages;

    let mut plan = plan.clone();
    let location = failure.location;
    let mut object = failure.object;
    let mut action = failure.action;
    let mut subs: Vec<Substitution> = Vec::new();

    let emit = |state: &mut GenQueues, plan: TaskPlan, substitutions: Vec<Substitution>| {
        let a = &plan.actions[failure.step / STEPS_PER_ACTION];
        let level = Level::of(a.verb != origin.action, a.tool != origin.object, a.source != origin.location);
        state.trace.push(TraceEntry {
            attempt: state.trace.len() + 1,
            level,
            substitutions,
            plan_hash: plan.hash(),
        });
        GeneralizationOutcome::Plan(plan)
    };

    loop {
        if stages.location {
            if state.l_subs.is_none() {
                // The demo pairing already failed at l_d; any other pairing
                // tries l_d first.
                let ranked = ks.locations_for(object, env, caps.locations.saturating_add(1));
                let queue = if action == origin.action && object == origin.object {
                    truncated(ranked, Some(&origin.location), caps.locations)
                } else {
                    let mut all = vec![origin.location];
                    all.extend(ranked);
                    truncated(all, None, caps.locations)
                };
                state.l_subs = Some(queue);
            }
            let queue = state.l_subs.as_mut().expect("filled");
            while let Some(l) = queue.pop_front() {
                if env.location(l).is_some() {
                    let sub = Substitution::Location(location, l);
                    subs.push(sub);
                    return Ok(emit(state, plan.replace(sub), subs));
                }
            }
        } else if !subs.is_empty() {
            return Ok(emit(state, plan, subs));
        }

        if !stages.object {
            return Ok(GeneralizationOutcome::TaskFailure);
        }
        if state.o_subs.is_none() {
            let ranked = ks.objects_for(action, target, origin.object, caps.objects.saturating_add(1));
            let skip = (action == origin.action).then_some(&origin.object);
            state.o_subs = Some(truncated(ranked, skip, caps.objects));
        }
        if let Some(o) = state.o_subs.as_mut().expect("filled").pop_front() {
            let sub = Substitution::Object(object, o);
            plan = plan.replace(sub);
            subs.push(sub);
            object = o;
            state.l_subs = None;
            continue;
        }

        if !stages.action {
            return Ok(GeneralizationOutcome::TaskFailure);
        }
        if state.a_subs.is_none() {
            let ranked = ks.actions_for(effect, target, origin.action, caps.actions.saturating_add(1));
            state.a_subs = Some(truncated(ranked, Some(&origin.action), caps.actions));
        }
        match state.a_subs.as_mut().expect("filled").pop_front() {
            Some(a) => {
                let sub = Substitution::Action(action, a);
                plan = plan.replace(sub);
                subs.push(sub);
                action = a;
                state.o_subs = None;
            }
            None => return Ok(GeneralizationOutcome::TaskFailure),
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::kg::{Dataset, Relation, Split, TripleKey};
use crate::taskgen::{generalize_task, GenQueues, GeneralizationOutcome, KnowledgeSource, QueueCaps, Stages, TraceEntry};
use crate::world::{execute, Demo, Goal, Outcome, PerturbationType, Solution, WorldState};

use super::BenchError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub source: String,
    pub demo: usize,
    pub env: usize,
    pub perturbation: PerturbationType,
    pub success: bool,
    /// Plan executions, the demo plan included.
    pub attempts: usize,
    pub trace: Vec<TraceEntry>,
    pub solution: Solution,
    /// Least-known split among the facts the unique solution needs.
    pub support: Option<Split>,
}

/// Runs the demo plan in `world`, generalizing after every failure until a
/// plan succeeds, the queues run dry or the attempt bound is reached.
/// Returns `(success, attempts, trace)`.
pub fn run_episode<K: KnowledgeSource + ?Sized>(
    demo: &Demo,
    world: &WorldState,
    ks: &K,
    caps: QueueCaps,
    stages: Stages,
    gt: &crate::kg::GroundTruth,
) -> Result<(bool, usize, Vec<TraceEntry>), BenchError> {
    let mut world = world.clone();
    let mut queues = GenQueues::new(caps, stages)?;
    let bound = caps.emission_bound().saturating_add(1);
    let mut plan = demo.plan.clone();
    let mut attempts = 0;
    let success = loop {
        attempts += 1;
        let failure = match execute(&plan, &mut world, gt)? {
            Outcome::Success => break true,
            Outcome::Failure(f) => f,
        };
        if attempts >= bound {
            log::warn!("attempt bound {bound} reached");
            break false;
        }
        match generalize_task(&plan, &failure, &mut queues, ks, &world)? {
            GeneralizationOutcome::Plan(next) => plan = next,
            GeneralizationOutcome::TaskFailure => break false,
        }
    };
    Ok((success, attempts, queues.trace().to_vec()))
}

/// The split that the solution's supporting facts reach into, taking the
/// least-known one: `Test` if any needed fact is a test triple, then
/// `Valid`, then `Train`. A location counts as train-supported when either
/// containment relation is in the training split. `None` when some needed
/// fact is absent from the dataset.
pub fn support_split(ds: &Dataset, goal: Goal, s: &Solution) -> Option<Split> {
    let split = |h, r, t| ds.split_of(&TripleKey::new(h, r, t));
    let rank = |s: Split| match s {
        Split::Train => 0,
        Split::Valid => 1,
        Split::Test => 2,
    };
    let location = [Relation::ObjInLoc, Relation::ObjOnLoc]
        .into_iter()
        .filter_map(|r| split(s.object, r, s.location.class))
        .min_by_key(|x| rank(*x));
    let needed = [
        split(s.object, Relation::ObjUsedTo, s.action),
        split(s.object, Relation::OperatesOn, goal.target),
        split(goal.target, Relation::ObjCanBe, s.action),
        split(s.action, Relation::HasEffect, goal.effect),
        split(s.location.class, Relation::LocInRoom, s.location.room),
        location,
    ];
    let mut worst = Split::Train;
    for n in needed {
        let n = n?;
        if rank(n) > rank(worst) {
            worst = n;
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::sd_source;
    use crate::kg::{Triple, TripleKey};
    use crate::taskgen::GroundTruthSource;
    use crate::world::fixture::kitchen;
    use crate::world::LocId;

    #[test]
    fn unperturbed_world_succeeds_first_time() {
        let k = kitchen();
        let (ok, attempts, trace) =
            run_episode(&k.demo, &k.demo.world, &sd_source(), QueueCaps::default(), Stages::ALL, &k.gt).unwrap();
        assert!(ok);
        assert_eq!(attempts, 1);
        assert!(trace.is_empty());
    }

    #[test]
    fn attempts_count_every_execution() {
        let k = kitchen();
        let mut w = k.demo.world.clone();
        let sponge = w.instances_of(k.id("sponge"))[0].id;
        w.move_object(sponge, LocId(2)).unwrap();
        let truth = GroundTruthSource::new(&k.gt);
        let (ok, attempts, trace) = run_episode(&k.demo, &w, &truth, QueueCaps::default(), Stages::ALL, &k.gt).unwrap();
        assert!(ok);
        assert_eq!(attempts, trace.len() + 1);
        let (ok, attempts, _) = run_episode(&k.demo, &w, &sd_source(), QueueCaps::default(), Stages::ALL, &k.gt).unwrap();
        assert!(!ok);
        assert_eq!(attempts, 1);
    }

    #[test]
    fn support_reports_the_least_known_split() {
        let k = kitchen();
        let c = k.gt.catalog().clone();
        let mut train: Vec<Triple> = k.gt.triples().iter().map(|t| Triple::new(t.head, t.relation, t.tail, 1)).collect();
        let held = TripleKey::new(k.id("rag"), Relation::ObjUsedTo, k.id("wipe"));
        let i = train.iter().position(|t| t.key() == held).unwrap();
        let test = vec![train.remove(i)];
        let ds = Dataset::new(c, train, vec![], test).unwrap();
        let goal = k.demo.goal;
        let demo = Solution { action: k.id("wipe"), object: k.id("sponge"), location: k.demo.location };
        assert_eq!(support_split(&ds, goal, &demo), Some(Split::Train));
        let rag = Solution { action: k.id("wipe"), object: k.id("rag"), location: k.slot("cabinet", "kitchen") };
        assert_eq!(support_split(&ds, goal, &rag), Some(Split::Test));
        let nowhere = Solution { location: k.slot("sink", "kitchen"), ..rag };
        assert_eq!(support_split(&ds, goal, &nowhere), None);
    }
}

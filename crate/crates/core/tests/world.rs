use plangen::baselines::sd_source;
use plangen::kg::{generate_synthetic_kg, GroundTruth, Profile};
use plangen::taskgen::{generalize_task, GenQueues, GeneralizationOutcome, QueueCaps, Stages};
use plangen::world::{build_demo, check_plausibility, execute, oracle_solutions, perturb, perturb_random, Outcome, PerturbationType};
use std::sync::OnceLock;

fn gt() -> &'static GroundTruth {
    static GT: OnceLock<GroundTruth> = OnceLock::new();
    GT.get_or_init(|| generate_synthetic_kg(7, &Profile::default()).unwrap())
}

#[test]
fn demos_succeed_and_perturbations_break_them() {
    let gt = gt();
    for s in 0..6 {
        let demo = build_demo(gt, s).unwrap();
        let mut w = demo.world.clone();
        assert!(execute(&demo.plan, &mut w, gt).unwrap().is_success());
        check_plausibility(&demo.world, gt).unwrap();
        for (j, ptype) in PerturbationType::STRUCTURED.into_iter().enumerate() {
            let env = perturb(&demo, ptype, gt, 100 * s + j as u64).unwrap();
            check_plausibility(&env, gt).unwrap();
            let sol = oracle_solutions(&env, demo.goal, gt);
            assert_eq!(sol.len(), 1, "{ptype}");
            assert_eq!(Some(demo.level_of(&sol[0])), ptype.level());
            let mut w = env.clone();
            assert!(!execute(&demo.plan, &mut w, gt).unwrap().is_success());
        }
    }
}

#[test]
fn perturbation_is_seeded() {
    let gt = gt();
    let demo = build_demo(gt, 2).unwrap();
    let a = perturb_random(&demo, gt, 9).unwrap();
    let b = perturb_random(&demo, gt, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_demo_fails_on_location_and_object_perturbations() {
    let gt = gt();
    let sd = sd_source();
    let demo = build_demo(gt, 4).unwrap();
    for ptype in [PerturbationType::L, PerturbationType::O, PerturbationType::AO] {
        let mut env = perturb(&demo, ptype, gt, 17).unwrap();
        let failure = match execute(&demo.plan, &mut env, gt).unwrap() {
            Outcome::Failure(f) => f,
            Outcome::Success => panic!("{ptype} left the demo plan intact"),
        };
        let mut queues = GenQueues::new(QueueCaps::default(), Stages::ALL).unwrap();
        let out = generalize_task(&demo.plan, &failure, &mut queues, &sd, &env).unwrap();
        assert_eq!(out, GeneralizationOutcome::TaskFailure, "{ptype}");
    }
}

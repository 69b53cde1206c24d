//! Symbolic household simulator: environments, plan execution with
//! precondition checks, perturbed execution environments and a solution
//! oracle.

mod env;
#[cfg(test)]
pub(crate) mod fixture;
mod plan;
mod state;

use thiserror::Error;

pub use env::{
    build_demo, check_plausibility, empty_environment, location_slots, oracle_solutions, perturb,
    perturb_random, plausible, solution_pairs, Demo, Level, PerturbationType, Solution,
    DISTRACTORS, PERTURB_RETRIES,
};
pub use plan::{
    applicable, execute, FailureContext, Goal, Outcome, PrimitiveAction, StepKind, Substitution,
    TaskPlan, STEPS_PER_ACTION,
};
pub use state::{LocId, LocationInstance, LocationSlot, ObjId, ObjectInstance, WorldState};

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("no feasible demonstration under this ground truth")]
    NoFeasibleDemo,
    #[error("unsatisfiable perturbation {0}")]
    UnsatisfiablePerturbation(String),
    #[error("unknown perturbation type `{0}`")]
    UnknownPerturbation(String),
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
    #[error("implausible placement: {0}")]
    Implausible(String),
    #[error("no location instance {0}")]
    UnknownLocation(LocId),
    #[error("no object instance {0}")]
    UnknownObject(ObjId),
    #[error("snapshot line {line}: {reason}")]
    Snapshot { line: usize, reason: String },
}

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;

use plangen::kg::load_ground_truth;
use plangen::world::{build_demo, oracle_solutions, perturb, perturb_random, PerturbationType};

use crate::manifest::Recorder;
use crate::{check, ensure_dir, resolve_seed, CatalogArg};

#[derive(Debug, Subcommand)]
pub enum WorldCommand {
    /// Build a demonstration and one perturbed execution environment.
    Gen(GenArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    gt: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    catalog: CatalogArg,
    #[arg(long)]
    seed: Option<u64>,
    /// L, O, OL, AO, AOL or Random.
    #[arg(long, default_value = "Random")]
    perturbation: String,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

pub fn run(cmd: WorldCommand) -> Result<()> {
    let WorldCommand::Gen(a) = cmd;
    let seed = resolve_seed(a.seed);
    let mut rec = Recorder::new("world gen", Some(seed), &a)?;
    rec.input(&a.gt)?;
    let catalog = a.catalog.load(Some(&mut rec))?;
    let gt = load_ground_truth(&a.gt, catalog.as_ref())?;
    let c = gt.catalog();
    let demo = build_demo(&gt, plangen::rng::derive_seed(seed, &[1]))?;
    let env_seed = plangen::rng::derive_seed(seed, &[2]);
    let (ptype, env) = match a.perturbation.parse::<PerturbationType>()? {
        PerturbationType::Random => perturb_random(&demo, &gt, env_seed)?,
        p => (p, perturb(&demo, p, &gt, env_seed)?),
    };
    let solutions = oracle_solutions(&env, demo.goal, &gt);
    check(solutions.len() == 1, format!("{} oracle solutions", solutions.len()))?;
    let s = solutions[0];
    ensure_dir(&a.out)?;
    rec.output(&a.out, "demo.world", &demo.world.snapshot(c))?;
    rec.output(&a.out, "env.world", &env.snapshot(c))?;
    rec.output(&a.out, "plan.txt", &demo.plan.describe(c))?;
    rec.output(
        &a.out,
        "solution.txt",
        &format!(
            "perturbation {ptype}\nlevel {}\naction {}\nobject {}\nlocation {}\n",
            demo.level_of(&s),
            c.name(s.action),
            c.name(s.object),
            s.location.describe(c)
        ),
    )?;
    rec.finish(&a.out)?;
    Ok(())
}

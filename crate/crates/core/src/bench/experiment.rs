use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::PlanNetworkStore;
use crate::kg::GroundTruth;
use crate::rng::derive_seed;
use crate::world::{build_demo, oracle_solutions, perturb, perturb_random, Demo, PerturbationType, Solution, WorldState};

use super::{episode::support_split, mean_std, run_episode, with_pool, BenchError, EpisodeRecord, ExperimentConfig, Resources, SourceKind};

/// One perturbed execution environment and its unique solution.
#[derive(Debug, Clone)]
pub struct Environment {
    pub index: usize,
    pub perturbation: PerturbationType,
    pub world: WorldState,
    pub solution: Solution,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub index: usize,
    pub demo: Demo,
    pub envs: Vec<Environment>,
}

pub fn demo_seed(seed: u64, demo: usize) -> u64 {
    derive_seed(seed, &[0xde_40, demo as u64])
}

pub fn env_seed(seed: u64, demo: usize, env: usize) -> u64 {
    derive_seed(seed, &[0xe4_f0, demo as u64, env as u64])
}

/// Demos and their environments for `seed`. The same seed yields the same
/// scenarios for every source, which is what makes comparisons paired.
pub fn scenarios(
    gt: &GroundTruth,
    demos: usize,
    envs: usize,
    seed: u64,
    perturbation: PerturbationType,
) -> Result<Vec<Scenario>, BenchError> {
    (0..demos)
        .into_par_iter()
        .map(|i| {
            let demo = build_demo(gt, demo_seed(seed, i))?;
            let envs = (0..envs)
                .map(|j| {
                    let s = env_seed(seed, i, j);
                    let (perturbation, world) = match perturbation {
                        PerturbationType::Random => perturb_random(&demo, gt, s)?,
                        p => (p, perturb(&demo, p, gt, s)?),
                    };
                    let solution = oracle_solutions(&world, demo.goal, gt)
                        .first()
                        .copied()
                        .ok_or_else(|| crate::world::WorldError::UnsatisfiablePerturbation(perturbation.to_string()))?;
                    Ok(Environment {
                        index: j,
                        perturbation,
                        world,
                        solution,
                    })
                })
                .collect::<Result<Vec<_>, BenchError>>()?;
            Ok(Scenario { index: i, demo, envs })
        })
        .collect()
}

/// Every episode of every scenario with one source. Stateless sources run
/// episodes in parallel; the plan network runs each demo's environments in
/// order, observing the oracle solution after each episode.
pub fn run_trials(
    scenarios: &[Scenario],
    source: SourceKind,
    res: &Resources,
    config: &ExperimentConfig,
) -> Result<Vec<EpisodeRecord>, BenchError> {
    let gt = &res.gt;
    let record = |sc: &Scenario, env: &Environment, run: (bool, usize, Vec<_>)| EpisodeRecord {
        source: source.name().to_string(),
        demo: sc.index,
        env: env.index,
        perturbation: env.perturbation,
        success: run.0,
        attempts: run.1,
        trace: run.2,
        solution: env.solution,
        support: res
            .dataset
            .as_ref()
            .and_then(|ds| support_split(ds, sc.demo.goal, &env.solution)),
    };
    if source == SourceKind::Pn {
        let per_demo: Vec<Vec<EpisodeRecord>> = scenarios
            .par_iter()
            .map(|sc| {
                let mut store = PlanNetworkStore::new();
                let mut out = Vec::with_capacity(sc.envs.len());
                for env in &sc.envs {
                    let run = run_episode(&sc.demo, &env.world, &store, config.caps, config.stages, gt)?;
                    out.push(record(sc, env, run));
                    for s in oracle_solutions(&env.world, sc.demo.goal, gt) {
                        store.observe(sc.demo.goal, &s);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, BenchError>>()?;
        return Ok(per_demo.into_iter().flatten().collect());
    }
    let ks = res.source(source)?;
    let jobs: Vec<(&Scenario, &Environment)> = scenarios
        .iter()
        .flat_map(|sc| sc.envs.iter().map(move |e| (sc, e)))
        .collect();
    jobs.par_iter()
        .map(|(sc, env)| {
            let run = run_episode(&sc.demo, &env.world, &*ks, config.caps, config.stages, gt)?;
            Ok(record(sc, env, run))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub source: String,
    pub demo: usize,
    pub episodes: usize,
    pub success_rate: f64,
    pub mean_attempts: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub episodes: Vec<EpisodeRecord>,
    pub trials: Vec<TrialSummary>,
}

/// Per-demo aggregates in demo order.
pub(crate) fn summarize(source: &str, episodes: &[EpisodeRecord]) -> Vec<TrialSummary> {
    let mut demos: Vec<usize> = episodes.iter().map(|e| e.demo).collect();
    demos.sort_unstable();
    demos.dedup();
    demos
        .into_iter()
        .map(|d| {
            let eps: Vec<&EpisodeRecord> = episodes.iter().filter(|e| e.demo == d).collect();
            let n = eps.len() as f64;
            TrialSummary {
                source: source.to_string(),
                demo: d,
                episodes: eps.len(),
                success_rate: eps.iter().filter(|e| e.success).count() as f64 / n,
                mean_attempts: eps.iter().map(|e| e.attempts as f64).sum::<f64>() / n,
            }
        })
        .collect()
}

impl ExperimentReport {
    pub fn success_rate(&self) -> f64 {
        self.episodes.iter().filter(|e| e.success).count() as f64 / self.episodes.len() as f64
    }

    pub fn mean_attempts(&self) -> f64 {
        self.episodes.iter().map(|e| e.attempts as f64).sum::<f64>() / self.episodes.len() as f64
    }

    /// Mean and standard deviation of per-trial success rates.
    pub fn success_stats(&self) -> (f64, f64) {
        mean_std(&self.trials.iter().map(|t| t.success_rate).collect::<Vec<_>>())
    }

    pub fn attempt_stats(&self) -> (f64, f64) {
        mean_std(&self.trials.iter().map(|t| t.mean_attempts).collect::<Vec<_>>())
    }

    /// Success flags in episode order, for transient plots.
    pub fn success_series(&self) -> Vec<f64> {
        self.episodes.iter().map(|e| if e.success { 1.0 } else { 0.0 }).collect()
    }

    pub fn trials_csv(&self) -> String {
        let mut out = String::from("source,demo,episodes,success_rate,mean_attempts\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6}\n",
                t.source, t.demo, t.episodes, t.success_rate, t.mean_attempts
            ));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let (s, sd) = self.success_stats();
        let (a, ad) = self.attempt_stats();
        format!(
            "source,trials,episodes,success_mean,success_std,attempts_mean,attempts_std\n{},{},{},{s:.6},{sd:.6},{a:.6},{ad:.6}\n",
            self.config.source,
            self.trials.len(),
            self.episodes.len()
        )
    }

    /// One JSON object per episode.
    pub fn episodes_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.episodes {
            out.push_str(&serde_json::to_string(e).expect("episode records serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn run_experiment(config: &ExperimentConfig, res: &Resources) -> Result<ExperimentReport, BenchError> {
    config.check()?;
    with_pool(config.jobs, || {
        let sc = scenarios(&res.gt, config.demos, config.envs, config.seed, config.perturbation)?;
        let episodes = run_trials(&sc, config.source, res, config)?;
        Ok(ExperimentReport {
            config: config.clone(),
            trials: summarize(config.source.name(), &episodes),
            episodes,
        })
    })
}

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use plangen::baselines::{synthetic_word_vectors, WordVectorTable};
use plangen::bench::{ablation_matrix, queue_grid, run_experiment, ExperimentConfig, Resources, SourceKind};
use plangen::kg::{load_ground_truth, load_triples};
use plangen::taskgen::{QueueCaps, Stages};
use plangen::world::PerturbationType;

use crate::kge::load_embeddings;
use crate::manifest::Recorder;
use crate::{check, ensure_dir, resolve_seed, CatalogArg};

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Success rate and attempts of one knowledge source.
    Run(BenchArgs),
    /// Environment types against stage ablations.
    Ablate(BenchArgs),
    /// The 27-configuration queue-capacity sweep.
    Grid(BenchArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Ground-truth TSV the simulator runs on.
    #[arg(long)]
    gt: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    catalog: CatalogArg,
    /// Dataset TSV; needed by `tm`, and used to classify solutions by split.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Embedding checkpoint for `kge` or `rcse`.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Word-vector text file for `we`; synthetic vectors when omitted.
    #[arg(long)]
    vectors: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    vector_seed: u64,
    #[arg(long, default_value_t = 50)]
    vector_dim: usize,
    #[arg(long, default_value_t = 0.6)]
    vector_noise: f64,
    /// kge, rcse, tm, we, pn, sd or truth.
    #[arg(long, default_value = "kge")]
    source: String,
    #[arg(long, default_value_t = 40)]
    demos: usize,
    #[arg(long, default_value_t = 300)]
    envs: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Location, object and action queue capacities.
    #[arg(long, default_value = "12,8,4")]
    queues: String,
    /// Enabled reasoning stages, e.g. `AOL` or `OL`.
    #[arg(long, default_value = "AOL")]
    stages: String,
    /// L, O, OL, AO, AOL or Random.
    #[arg(long, default_value = "Random")]
    perturbation: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

fn setup(a: &BenchArgs, command: &str) -> Result<(ExperimentConfig, Resources, Recorder)> {
    let seed = resolve_seed(a.seed);
    let source: SourceKind = a.source.parse()?;
    let config = ExperimentConfig {
        source,
        demos: a.demos,
        envs: a.envs,
        seed,
        perturbation: a.perturbation.parse::<PerturbationType>()?,
        caps: a.queues.parse::<QueueCaps>()?,
        stages: a.stages.parse::<Stages>()?,
        jobs: a.jobs,
    };
    config.check()?;
    let mut rec = Recorder::new(command, Some(seed), a)?;
    rec.input(&a.gt)?;
    let catalog = a.catalog.load(Some(&mut rec))?;
    let gt = load_ground_truth(&a.gt, catalog.as_ref())?;
    let mut res = Resources::new(gt);
    if let Some(p) = &a.data {
        rec.input(p)?;
        res.dataset = Some(load_triples(p, catalog.as_ref())?);
    }
    match source {
        SourceKind::Kge | SourceKind::Rcse => {
            let Some(p) = &a.checkpoint else {
                bail!("source {source} needs --checkpoint");
            };
            rec.input(p)?;
            let theta = load_embeddings(p)?;
            if theta.catalog() != res.gt.catalog() {
                bail!("checkpoint catalog differs from the ground truth's");
            }
            if source == SourceKind::Kge {
                res.theta = Some(theta);
            } else {
                res.rcse = Some(theta);
            }
        }
        SourceKind::Tm if res.dataset.is_none() => bail!("source tm needs --data"),
        SourceKind::We => {
            res.vectors = Some(match &a.vectors {
                Some(p) => {
                    rec.input(p)?;
                    let table = WordVectorTable::load(p)?;
                    let cov = table.coverage(res.gt.catalog());
                    if !cov.missing.is_empty() {
                        log::warn!("{} entities lack word vectors", cov.missing.len());
                    }
                    table
                }
                None => synthetic_word_vectors(res.gt.catalog(), a.vector_seed, a.vector_dim, a.vector_noise),
            });
        }
        _ => {}
    }
    ensure_dir(&a.out)?;
    Ok((config, res, rec))
}

pub fn run(cmd: BenchCommand) -> Result<()> {
    match cmd {
        BenchCommand::Run(a) => {
            let (config, res, mut rec) = setup(&a, "bench run")?;
            let report = run_experiment(&config, &res)?;
            rec.output(&a.out, "trials.csv", &report.trials_csv())?;
            rec.output(&a.out, "summary.csv", &report.summary_csv())?;
            rec.output(&a.out, "episodes.jsonl", &report.episodes_jsonl())?;
            rec.finish(&a.out)?;
            let (m, sd) = report.success_stats();
            log::info!(
                "{}: success {:.1}% ± {:.1}, attempts {:.2}",
                config.source,
                100.0 * m,
                100.0 * sd,
                report.mean_attempts()
            );
            check(report.episodes.iter().all(|e| e.attempts >= 1), "every episode makes an attempt")
        }
        BenchCommand::Ablate(a) => {
            let (config, res, mut rec) = setup(&a, "bench ablate")?;
            let m = ablation_matrix(&config, &res)?;
            rec.output(&a.out, "ablation.csv", &m.to_csv())?;
            rec.output(&a.out, "ablation.json", &(serde_json::to_string_pretty(&m)? + "\n"))?;
            rec.finish(&a.out)?;
            let nonzero: Vec<_> = m
                .structural_zeros()
                .into_iter()
                .filter(|(i, j)| m.success[*i][*j] != 0.0)
                .collect();
            check(nonzero.is_empty(), format!("structural-zero cells with successes: {nonzero:?}"))
        }
        BenchCommand::Grid(a) => {
            let (config, res, mut rec) = setup(&a, "bench grid")?;
            let g = queue_grid(&config, &res)?;
            let success = g.violations("success");
            let attempts = g.violations("attempts");
            rec.output(&a.out, "grid.csv", &g.to_csv())?;
            rec.output(
                &a.out,
                "grid_diagnostics.json",
                &(serde_json::to_string_pretty(&serde_json::json!({
                    "success_violations": success,
                    "attempt_violations": attempts,
                }))? + "\n"),
            )?;
            rec.finish(&a.out)?;
            if !attempts.is_empty() {
                log::warn!("{} capacity pairs where mean attempts decrease", attempts.len());
            }
            check(success.is_empty(), format!("{} capacity pairs where success decreases", success.len()))
        }
    }
}

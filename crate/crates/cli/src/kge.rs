use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use plangen::baselines::rcse_relations;
use plangen::kg::{load_triples, Relation, Split};
use plangen::kge::{
    checkpoint_from_str, checkpoint_to_string, evaluate, random_baseline, train, KgeError, Protocol, TrainConfig,
};
use plangen::{Embeddings, Scalar};

use crate::manifest::Recorder;
use crate::{ensure_dir, resolve_seed, CatalogArg};

#[derive(Debug, Subcommand)]
pub enum KgeCommand {
    /// Train embeddings on a dataset's train split.
    Train(TrainArgs),
    /// Link-prediction metrics of a checkpoint on one split.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    /// Dataset TSV.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    catalog: CatalogArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    /// Embedding dimension; a quarter of it goes to 2x2 blocks.
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 6)]
    negatives: usize,
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    /// Sample training triples uniformly instead of by weight.
    #[arg(long)]
    unweighted: bool,
    /// Comma-separated relations to train; all when omitted.
    #[arg(long, conflicts_with = "rcse")]
    relations: Option<String>,
    /// Train only the location and affordance relations.
    #[arg(long)]
    rcse: bool,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    scalar: Precision,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    catalog: CatalogArg,
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long, default_value = "test")]
    split: String,
    #[arg(long, default_value = "filtered")]
    protocol: String,
    /// Directory for `metrics.json`; printed to stdout otherwise.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

/// Loads a checkpoint of either precision as f64.
pub fn load_embeddings(path: &Path) -> Result<Embeddings> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match checkpoint_from_str::<f64>(&text) {
        Err(KgeError::ScalarMismatch { .. }) => Ok(checkpoint_from_str::<f32>(&text)?.cast()),
        other => Ok(other?),
    }
}

#[derive(Serialize)]
struct TrainSummary {
    epochs: usize,
    final_loss: Option<f64>,
    short_negatives: u64,
    valid_mrr: Vec<(usize, f64)>,
    train_hits1: f64,
    test: plangen::kge::Metrics,
    random_test_mrr: f64,
}

fn train_as<T: Scalar>(
    ds: &plangen::kg::Dataset,
    cfg: &TrainConfig,
    rec: &mut Recorder,
    out: &Path,
) -> Result<()> {
    let (theta, report) = train::<T>(ds, cfg)?;
    let tr = evaluate(&theta, ds.train(), ds.known(), Protocol::Filtered)?;
    let te = evaluate(&theta, ds.test(), ds.known(), Protocol::Filtered)?;
    let rb = random_baseline(ds.catalog(), ds.test(), ds.known(), Protocol::Filtered);
    let summary = TrainSummary {
        epochs: cfg.epochs,
        final_loss: report.epoch_loss.last().copied(),
        short_negatives: report.short_negatives as u64,
        valid_mrr: report.valid_mrr.clone(),
        train_hits1: tr.hits1,
        test: te,
        random_test_mrr: rb.mrr,
    };
    log::info!(
        "train hits@1 {:.3}, test MRR {:.3} (random {:.3})",
        tr.hits1,
        te.mrr,
        rb.mrr
    );
    rec.output(out, "embeddings.ckpt", &checkpoint_to_string(&theta))?;
    rec.output(out, "train_report.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    Ok(())
}

pub fn run(cmd: KgeCommand) -> Result<()> {
    match cmd {
        KgeCommand::Train(a) => {
            let seed = resolve_seed(a.seed);
            let mut rec = Recorder::new("kge train", Some(seed), &a)?;
            rec.input(&a.data)?;
            let catalog = a.catalog.load(Some(&mut rec))?;
            let ds = load_triples(&a.data, catalog.as_ref())?;
            let subset: Option<BTreeSet<Relation>> = if a.rcse {
                Some(rcse_relations())
            } else {
                a.relations
                    .as_deref()
                    .map(|s| s.split(',').map(|r| r.trim().parse::<Relation>()).collect::<Result<_, _>>())
                    .transpose()?
            };
            let cfg = TrainConfig {
                epochs: a.epochs,
                negatives: a.negatives,
                batch_size: a.batch_size,
                learning_rate: a.learning_rate,
                seed,
                weighted: !a.unweighted,
                relation_subset: subset,
                ..TrainConfig::default().with_dim(a.dim)
            };
            ensure_dir(&a.out)?;
            match a.scalar {
                Precision::F64 => train_as::<f64>(&ds, &cfg, &mut rec, &a.out)?,
                Precision::F32 => train_as::<f32>(&ds, &cfg, &mut rec, &a.out)?,
            }
            rec.finish(&a.out)?;
            Ok(())
        }
        KgeCommand::Eval(a) => {
            let mut rec = Recorder::new("kge eval", None, &a)?;
            rec.input(&a.data)?;
            rec.input(&a.checkpoint)?;
            let catalog = a.catalog.load(Some(&mut rec))?;
            let ds = load_triples(&a.data, catalog.as_ref())?;
            let theta = load_embeddings(&a.checkpoint)?;
            if theta.catalog() != ds.catalog() {
                bail!("checkpoint and dataset use different catalogs");
            }
            let split: Split = a.split.parse()?;
            let protocol: Protocol = a.protocol.parse().map_err(anyhow::Error::msg)?;
            let m = evaluate(&theta, ds.split(split), ds.known(), protocol)?;
            let rb = random_baseline(ds.catalog(), ds.split(split), ds.known(), protocol);
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "split": split.to_string(),
                "protocol": protocol.to_string(),
                "metrics": m,
                "random_baseline": { "mrr": rb.mrr, "sigma": rb.sigma },
            }))? + "\n";
            match &a.out {
                Some(dir) => {
                    ensure_dir(dir)?;
                    rec.output(dir, "metrics.json", &text)?;
                    rec.finish(dir)?;
                }
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;

use plangen::kg::{dataset_to_tsv, ground_truth_to_tsv, load_ground_truth, split_dataset, Profile, SplitRatios, WeightModel};

use crate::manifest::Recorder;
use crate::{ensure_dir, resolve_seed, CatalogArg};

#[derive(Debug, Subcommand)]
pub enum KgCommand {
    /// Generate a synthetic ground-truth graph.
    Gen(GenArgs),
    /// Split a ground truth into weighted train/valid/test triples.
    Split(SplitArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Per-relation unique-triple overrides, e.g. `ObjInLoc=500,HasEffect=30`.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SplitArgs {
    /// Ground-truth TSV.
    #[arg(long)]
    gt: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    catalog: CatalogArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Train, valid and test fractions.
    #[arg(long, default_value = "0.8,0.1,0.1")]
    ratios: String,
    /// Give every train triple weight 1.
    #[arg(long)]
    uniform_weights: bool,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

pub fn run(cmd: KgCommand) -> Result<()> {
    match cmd {
        KgCommand::Gen(a) => {
            let seed = resolve_seed(a.seed);
            let profile = match &a.profile {
                Some(p) => Profile::parse_overrides(p)?,
                None => Profile::default(),
            };
            let gt = plangen::kg::generate_synthetic_kg(seed, &profile)?;
            ensure_dir(&a.out)?;
            let mut rec = Recorder::new("kg gen", Some(seed), &a)?;
            rec.output(&a.out, "ground_truth.tsv", &ground_truth_to_tsv(&gt))?;
            rec.output(&a.out, "catalog.tsv", &gt.catalog().to_tsv())?;
            rec.finish(&a.out)?;
            log::info!("{} ground-truth triples written to {}", gt.len(), a.out.display());
            Ok(())
        }
        KgCommand::Split(a) => {
            let seed = resolve_seed(a.seed);
            let mut rec = Recorder::new("kg split", Some(seed), &a)?;
            rec.input(&a.gt)?;
            let catalog = a.catalog.load(Some(&mut rec))?;
            let gt = load_ground_truth(&a.gt, catalog.as_ref())?;
            let weights = if a.uniform_weights {
                WeightModel::uniform()
            } else {
                WeightModel::default()
            };
            let ds = split_dataset(&gt, SplitRatios::parse(&a.ratios)?, seed, &weights)?;
            ensure_dir(&a.out)?;
            rec.output(&a.out, "dataset.tsv", &dataset_to_tsv(&ds))?;
            rec.finish(&a.out)?;
            log::info!(
                "{} train / {} valid / {} test triples",
                ds.train().len(),
                ds.valid().len(),
                ds.test().len()
            );
            Ok(())
        }
    }
}

//! `plangen` command line: knowledge-graph generation and splitting,
//! embedding training and evaluation, environment inspection, and
//! experiments. Exit codes: 0 success, 1 runtime error or invariant
//! violation, 2 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub mod config;
pub mod manifest;

mod bench;
mod kg;
mod kge;
mod world;

pub use manifest::{RunManifest, MANIFEST_FILE};

#[derive(Debug, Parser)]
#[command(name = "plangen", version, about = "Task-plan generalization with knowledge graph embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-truth generation and dataset splits.
    #[command(subcommand)]
    Kg(kg::KgCommand),
    /// Embedding training and link-prediction evaluation.
    #[command(subcommand)]
    Kge(kge::KgeCommand),
    /// Demonstrations and perturbed environments.
    #[command(subcommand)]
    World(world::WorldCommand),
    /// Experiments over demos and environments.
    #[command(subcommand)]
    Bench(bench::BenchCommand),
}

/// Explicit seed or a fresh one, logged so the run can be repeated.
pub(crate) fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        log::info!("no --seed given; using {s}");
        s
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub(crate) struct CatalogArg {
    /// Entity catalog TSV; the default household catalog when omitted.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

impl CatalogArg {
    pub fn load(&self, rec: Option<&mut manifest::Recorder>) -> Result<Option<plangen::kg::Catalog>> {
        let Some(path) = &self.catalog else { return Ok(None) };
        if let Some(rec) = rec {
            rec.input(path)?;
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Some(plangen::kg::Catalog::from_tsv(&text)?))
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Failure that maps to exit code 1 after its report has been written.
#[derive(Debug)]
pub(crate) struct InvariantViolation(pub String);

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant violated: {}", self.0)
    }
}

impl std::error::Error for InvariantViolation {}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Kg(c) => kg::run(c),
        Command::Kge(c) => kge::run(c),
        Command::World(c) => world::run(c),
        Command::Bench(c) => bench::run(c),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub(crate) fn check(cond: bool, what: impl Into<String>) -> Result<()> {
    if !cond {
        bail!(InvariantViolation(what.into()));
    }
    Ok(())
}

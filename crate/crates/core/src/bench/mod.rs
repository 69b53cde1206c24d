//! Experiment harness: episodes, trials over demos and environments,
//! ablation matrices, queue-size sweeps and reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{TrainingMemory, WordVectorSource, WordVectorTable};
use crate::kg::{Dataset, GroundTruth};
use crate::taskgen::{GroundTruthSource, KgeSource, KnowledgeSource, QueueCaps, Stages, TaskgenError};
use crate::world::{PerturbationType, WorldError};
use crate::Embeddings;

mod episode;
mod experiment;
mod grid;
mod stats;

pub use episode::{run_episode, support_split, EpisodeRecord};
pub use experiment::{run_experiment, run_trials, scenarios, Environment, ExperimentReport, Scenario, TrialSummary};
pub use grid::{ablation_matrix, queue_grid, queue_grid_caps, AblationMatrix, GridReport, GridRow, Violation};
pub use stats::{mean_std, moving_average};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("source `{0}` needs {1}, which was not provided")]
    MissingResource(SourceKind, &'static str),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("unknown source `{0}`")]
    UnknownSource(String),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Taskgen(#[from] TaskgenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Kge,
    Rcse,
    Tm,
    We,
    Pn,
    Sd,
    Truth,
}

impl SourceKind {
    pub const ALL: [SourceKind; 7] = [
        SourceKind::Kge,
        SourceKind::Rcse,
        SourceKind::Tm,
        SourceKind::We,
        SourceKind::Pn,
        SourceKind::Sd,
        SourceKind::Truth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SourceKind::Kge => "kge",
            SourceKind::Rcse => "rcse",
            SourceKind::Tm => "tm",
            SourceKind::We => "we",
            SourceKind::Pn => "pn",
            SourceKind::Sd => "sd",
            SourceKind::Truth => "truth",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SourceKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::UnknownSource(s.to_string()))
    }
}

/// Everything a knowledge source may be built from. Only the pieces the
/// selected source needs have to be present.
pub struct Resources {
    pub gt: GroundTruth,
    pub dataset: Option<Dataset>,
    pub theta: Option<Embeddings>,
    pub rcse: Option<Embeddings>,
    pub vectors: Option<WordVectorTable>,
}

impl Resources {
    pub fn new(gt: GroundTruth) -> Self {
        Self {
            gt,
            dataset: None,
            theta: None,
            rcse: None,
            vectors: None,
        }
    }

    /// A stateless source; `pn` is built per trial by the harness.
    pub fn source(&self, kind: SourceKind) -> Result<Box<dyn KnowledgeSource + '_>, BenchError> {
        let missing = |what| BenchError::MissingResource(kind, what);
        Ok(match kind {
            SourceKind::Kge => Box::new(KgeSource::named(self.theta.as_ref().ok_or(missing("embeddings"))?, "kge")),
            SourceKind::Rcse => Box::new(KgeSource::named(self.rcse.as_ref().ok_or(missing("rcse embeddings"))?, "rcse")),
            SourceKind::Tm => Box::new(TrainingMemory::new(self.dataset.as_ref().ok_or(missing("a dataset"))?)),
            SourceKind::We => Box::new(WordVectorSource::new(
                self.vectors.as_ref().ok_or(missing("word vectors"))?,
                self.gt.catalog(),
            )),
            SourceKind::Sd => Box::new(crate::baselines::sd_source()),
            SourceKind::Truth => Box::new(GroundTruthSource::new(&self.gt)),
            SourceKind::Pn => Box::new(crate::baselines::PlanNetworkStore::new()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: SourceKind,
    pub demos: usize,
    pub envs: usize,
    pub seed: u64,
    pub perturbation: PerturbationType,
    pub caps: QueueCaps,
    pub stages: Stages,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source: SourceKind::Kge,
            demos: 40,
            envs: 300,
            seed: 0,
            perturbation: PerturbationType::Random,
            caps: QueueCaps::default(),
            stages: Stages::ALL,
            jobs: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn check(&self) -> Result<(), BenchError> {
        if self.demos == 0 || self.envs == 0 {
            return Err(BenchError::InvalidConfig("demos and envs must be at least 1".into()));
        }
        self.stages.validate()?;
        let caps = self.caps;
        let bad = (self.stages.location && caps.locations == 0)
            || (self.stages.object && caps.objects == 0)
            || (self.stages.action && caps.actions == 0);
        if bad {
            return Err(BenchError::InvalidConfig(format!(
                "capacities {caps} must be at least 1 for enabled stages {}",
                self.stages.name()
            )));
        }
        Ok(())
    }
}

pub(crate) fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("falling back to the global pool: {e}");
            f()
        }
    }
}

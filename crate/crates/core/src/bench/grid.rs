use serde::{Deserialize, Serialize};

use crate::taskgen::{QueueCaps, Stages};
use crate::world::PerturbationType;

use super::{run_trials, scenarios, with_pool, BenchError, ExperimentConfig, Resources};

/// Success rates with rows over environment types and columns over stage
/// ablations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationMatrix {
    pub rows: Vec<PerturbationType>,
    pub columns: Vec<Stages>,
    pub success: Vec<Vec<f64>>,
    pub attempts: Vec<Vec<f64>>,
}

impl AblationMatrix {
    /// Cells whose ablation lacks a stage the environment type requires.
    pub fn structural_zeros(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.rows.iter().enumerate() {
            let Some(level) = p.level() else { continue };
            for (j, s) in self.columns.iter().enumerate() {
                if !s.covers(level) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("env_type");
        for c in &self.columns {
            out.push_str(&format!(",abl_{}", c.name()));
        }
        out.push('\n');
        for (p, row) in self.rows.iter().zip(&self.success) {
            out.push_str(p.name());
            for v in row {
                out.push_str(&format!(",{v:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Every environment type against every stage ablation, on the same
/// scenarios per row.
pub fn ablation_matrix(base: &ExperimentConfig, res: &Resources) -> Result<AblationMatrix, BenchError> {
    base.check()?;
    with_pool(base.jobs, || {
        let rows = PerturbationType::ALL.to_vec();
        let columns = Stages::ABLATIONS.to_vec();
        let mut success = Vec::new();
        let mut attempts = Vec::new();
        for p in &rows {
            let sc = scenarios(&res.gt, base.demos, base.envs, base.seed, *p)?;
            let (mut s_row, mut a_row) = (Vec::new(), Vec::new());
            for stages in &columns {
                let cfg = ExperimentConfig {
                    perturbation: *p,
                    stages: *stages,
                    ..base.clone()
                };
                let eps = run_trials(&sc, base.source, res, &cfg)?;
                let n = eps.len() as f64;
                s_row.push(eps.iter().filter(|e| e.success).count() as f64 / n);
                a_row.push(eps.iter().map(|e| e.attempts as f64).sum::<f64>() / n);
            }
            success.push(s_row);
            attempts.push(a_row);
        }
        Ok(AblationMatrix {
            rows,
            columns,
            success,
            attempts,
        })
    })
}

/// The 27 capacity triples of the sweep.
pub fn queue_grid_caps() -> Vec<QueueCaps> {
    let mut out = Vec::new();
    for l in [6, 12, 24] {
        for o in [4, 8, 16] {
            for a in [2, 4, 8] {
                out.push(QueueCaps::new(l, o, a));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub caps: QueueCaps,
    pub success_rate: f64,
    pub mean_attempts: f64,
    pub is_default: bool,
}

/// A dominated configuration outperforming a dominating one on a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub larger: QueueCaps,
    pub smaller: QueueCaps,
    pub metric: String,
    pub larger_value: f64,
    pub smaller_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
}

impl GridReport {
    /// Pairs ordered by capacity where `metric` decreases.
    pub fn violations(&self, metric: &str) -> Vec<Violation> {
        let value = |r: &GridRow| match metric {
            "success" => r.success_rate,
            _ => r.mean_attempts,
        };
        let mut out = Vec::new();
        for a in &self.rows {
            for b in &self.rows {
                if a.caps != b.caps && a.caps.dominates(&b.caps) && value(a) < value(b) {
                    out.push(Violation {
                        larger: a.caps,
                        smaller: b.caps,
                        metric: metric.to_string(),
                        larger_value: value(a),
                        smaller_value: value(b),
                    });
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("locations,objects,actions,success_rate,mean_attempts,default\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{}\n",
                r.caps.locations, r.caps.objects, r.caps.actions, r.success_rate, r.mean_attempts, r.is_default
            ));
        }
        out
    }
}

/// Success and attempts for every capacity triple on shared scenarios.
pub fn queue_grid(base: &ExperimentConfig, res: &Resources) -> Result<GridReport, BenchError> {
    base.check()?;
    with_pool(base.jobs, || {
        let sc = scenarios(&res.gt, base.demos, base.envs, base.seed, base.perturbation)?;
        let mut rows = Vec::new();
        for caps in queue_grid_caps() {
            let cfg = ExperimentConfig { caps, ..base.clone() };
            let eps = run_trials(&sc, base.source, res, &cfg)?;
            let n = eps.len() as f64;
            rows.push(GridRow {
                caps,
                success_rate: eps.iter().filter(|e| e.success).count() as f64 / n,
                mean_attempts: eps.iter().map(|e| e.attempts as f64).sum::<f64>() / n,
                is_default: caps == QueueCaps::default(),
            });
        }
        Ok(GridReport { rows })
    })
}

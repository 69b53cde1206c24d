use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::blocks::{bilinear, bilinear_grad, BlockStructure};
use super::eval::{evaluate, Protocol};
use super::{EmbeddingSet, KgeError};
use crate::kg::{Corruptor, Dataset, Relation, Triple, TripleIndex};
use crate::rng::stream;
use crate::scalar::{sigmoid, softplus, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub dim: usize,
    /// Number of 2x2 blocks; the remaining coordinates are 1x1.
    pub pairs: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub negatives: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Draw positives with probability proportional to their weight.
    pub weighted: bool,
    /// Train only these relations; the others get no map.
    pub relation_subset: Option<BTreeSet<Relation>>,
    /// Validation MRR every this many epochs; 0 turns it off.
    pub validate_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            dim: 100,
            pairs: 25,
            learning_rate: 0.1,
            epochs: 500,
            negatives: 6,
            batch_size: 128,
            seed: 0,
            weighted: true,
            relation_subset: None,
            validate_every: 1,
        }
    }
}

impl TrainConfig {
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self.pairs = dim / 4;
        self
    }

    pub fn structure(&self) -> Result<BlockStructure, KgeError> {
        if 2 * self.pairs > self.dim {
            return Err(KgeError::InvalidConfig(format!(
                "{} pair blocks do not fit in dimension {}",
                self.pairs, self.dim
            )));
        }
        Ok(BlockStructure::new(self.dim - 2 * self.pairs, self.pairs))
    }

    fn check(&self) -> Result<(), KgeError> {
        let bad = |what: &str| Err(KgeError::InvalidConfig(format!("{what} must be positive")));
        if self.dim == 0 {
            return bad("dim");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate");
        }
        if self.epochs == 0 {
            return bad("epochs");
        }
        if self.negatives == 0 {
            return bad("negatives");
        }
        if self.batch_size == 0 {
            return bad("batch size");
        }
        if self.relation_subset.as_ref().is_some_and(BTreeSet::is_empty) {
            return Err(KgeError::InvalidConfig("relation subset is empty".into()));
        }
        self.structure().map(|_| ())
    }

    fn keeps(&self, r: Relation) -> bool {
        self.relation_subset.as_ref().is_none_or(|s| s.contains(&r))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean loss per labeled sample, one entry per epoch.
    pub epoch_loss: Vec<f64>,
    /// `(epoch, filtered validation MRR)`, epochs counted from 1.
    pub valid_mrr: Vec<(usize, f64)>,
    pub short_negatives: usize,
}

/// Adagrad on the logistic loss. Negatives are corrupted against the
/// training split only, so held-out triples never inform the model.
pub fn train<T: Scalar>(
    dataset: &Dataset,
    config: &TrainConfig,
) -> Result<(EmbeddingSet<T>, TrainReport), KgeError> {
    config.check()?;
    let structure = config.structure()?;
    let positives: Vec<&Triple> = dataset
        .train()
        .iter()
        .filter(|t| config.keeps(t.relation))
        .collect();
    if positives.is_empty() {
        return Err(KgeError::EmptySplit);
    }
    let relations: Vec<Relation> = Relation::ALL
        .into_iter()
        .filter(|r| config.keeps(*r))
        .collect();
    let valid: Vec<Triple> = dataset
        .valid()
        .iter()
        .filter(|t| config.keeps(t.relation))
        .copied()
        .collect();

    let catalog = dataset.catalog();
    let mut theta = EmbeddingSet::<T>::random(catalog, structure, &relations, config.seed);
    let train_index = TripleIndex::new(positives.iter().map(|t| t.key()));
    let corruptor = Corruptor::new(catalog);
    let d = structure.dim();
    let lr = T::of(config.learning_rate);
    let eps = T::of(1e-10);

    let mut acc_e = vec![T::zero(); catalog.len() * d];
    let mut acc_r = vec![vec![T::zero(); d]; Relation::ALL.len()];
    let mut grad_e = vec![T::zero(); catalog.len() * d];
    let mut grad_r = vec![vec![T::zero(); d]; Relation::ALL.len()];
    let mut touched_e = vec![false; catalog.len()];
    let mut touched: Vec<usize> = Vec::new();
    let mut gh = vec![T::zero(); d];
    let mut gt = vec![T::zero(); d];

    let sampler = if config.weighted {
        Some(
            WeightedIndex::new(positives.iter().map(|t| t.weight as f64))
                .map_err(|e| KgeError::InvalidConfig(e.to_string()))?,
        )
    } else {
        None
    };
    let mut order: Vec<usize> = (0..positives.len()).collect();

    let mut report = TrainReport::default();
    for epoch in 0..config.epochs {
        let mut rng = stream(config.seed, &[0x7a1, epoch as u64]);
        match &sampler {
            Some(w) => order.iter_mut().for_each(|i| *i = w.sample(&mut rng)),
            None => order.shuffle(&mut rng),
        }
        let mut epoch_loss = 0.0f64;
        let mut samples = 0usize;
        for (b, chunk) in order.chunks(config.batch_size).enumerate() {
            let mut batch = Vec::with_capacity(chunk.len() * (config.negatives + 1));
            for &i in chunk {
                let key = positives[i].key();
                batch.push((key, T::one()));
                let c = corruptor.corrupt(key, &train_index, config.negatives, &mut rng);
                if c.short {
                    report.short_negatives += 1;
                }
                batch.extend(c.negatives.into_iter().map(|k| (k, -T::one())));
            }

            let mut batch_loss = T::zero();
            for (key, y) in &batch {
                let (h, t) = (key.head.index(), key.tail.index());
                let w = theta.relation(key.relation)?;
                let hv = theta.entity(key.head)?;
                let tv = theta.entity(key.tail)?;
                let f = bilinear(structure, w, hv, tv);
                batch_loss += softplus(-*y * f);
                let dl = -*y * sigmoid(-*y * f);
                gh.iter_mut().for_each(|x| *x = T::zero());
                gt.iter_mut().for_each(|x| *x = T::zero());
                bilinear_grad(structure, w, hv, tv, dl, &mut grad_r[key.relation.index()], &mut gh, &mut gt);
                for (e, g) in [(h, &gh), (t, &gt)] {
                    if !touched_e[e] {
                        touched_e[e] = true;
                        touched.push(e);
                    }
                    grad_e[e * d..(e + 1) * d]
                        .iter_mut()
                        .zip(g.iter())
                        .for_each(|(a, x)| *a += *x);
                }
            }
            if !batch_loss.is_finite() {
                return Err(KgeError::Diverged {
                    epoch: epoch + 1,
                    batch: b,
                });
            }
            epoch_loss += batch_loss.f64();
            samples += batch.len();

            let (ents, rels) = theta.params_mut();
            for &e in &touched {
                let range = e * d..(e + 1) * d;
                adagrad(&mut ents[range.clone()], &mut grad_e[range.clone()], &mut acc_e[range], lr, eps);
                touched_e[e] = false;
            }
            touched.clear();
            for r in &relations {
                let i = r.index();
                let w = rels[i].as_mut().expect("trained relation");
                adagrad(w, &mut grad_r[i], &mut acc_r[i], lr, eps);
            }
        }
        let mean = epoch_loss / samples.max(1) as f64;
        report.epoch_loss.push(mean);
        if config.validate_every > 0 && (epoch + 1) % config.validate_every == 0 && !valid.is_empty() {
            let m = evaluate(&theta, &valid, dataset.known(), Protocol::Filtered)?;
            log::debug!("epoch {} loss {mean:.5} valid mrr {:.4}", epoch + 1, m.mrr);
            report.valid_mrr.push((epoch + 1, m.mrr));
        } else {
            log::trace!("epoch {} loss {mean:.5}", epoch + 1);
        }
    }
    if !theta.is_finite() {
        return Err(KgeError::NonFinite);
    }
    Ok((theta, report))
}

/// One Adagrad step; clears the gradient buffer.
fn adagrad<T: Scalar>(p: &mut [T], g: &mut [T], acc: &mut [T], lr: T, eps: T) {
    for ((p, g), a) in p.iter_mut().zip(g.iter_mut()).zip(acc.iter_mut()) {
        if *g != T::zero() {
            *a += *g * *g;
            *p -= lr * *g / (a.sqrt() + eps);
            *g = T::zero();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::parse_triples;

    fn tiny() -> Dataset {
        let text = "\
cup\tObjInLoc\tcabinet\t5\ttrain
plate\tObjInLoc\tcabinet\t3\ttrain
cup\tObjOnLoc\tcounter\t1\ttrain
sponge\tObjInLoc\tsink\t4\ttrain
sponge\tObjUsedTo\twipe\t2\ttrain
rag\tObjUsedTo\twipe\t2\ttrain
plate\tObjInLoc\tsink\t1\tvalid
rag\tObjInLoc\tsink\t1\ttest
";
        parse_triples(text, None).unwrap()
    }

    fn quick() -> TrainConfig {
        TrainConfig {
            epochs: 30,
            batch_size: 4,
            seed: 2,
            validate_every: 0,
            ..TrainConfig::default().with_dim(8)
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        let ds = tiny();
        for cfg in [
            TrainConfig { epochs: 0, ..quick() },
            TrainConfig { negatives: 0, ..quick() },
            TrainConfig { learning_rate: f64::NAN, ..quick() },
            TrainConfig { pairs: 5, ..quick() },
            TrainConfig { relation_subset: Some(BTreeSet::new()), ..quick() },
        ] {
            assert!(matches!(train::<f64>(&ds, &cfg), Err(KgeError::InvalidConfig(_))));
        }
    }

    #[test]
    fn loss_falls_and_runs_repeat() {
        let ds = tiny();
        let (theta, rep) = train::<f64>(&ds, &quick()).unwrap();
        assert_eq!(rep.epoch_loss.len(), 30);
        assert!(rep.epoch_loss.last().unwrap() < &rep.epoch_loss[0]);
        assert!(theta.is_finite());
        let (again, rep2) = train::<f64>(&ds, &quick()).unwrap();
        assert_eq!(rep, rep2);
        assert_eq!(crate::kge::checkpoint_to_string(&theta), crate::kge::checkpoint_to_string(&again));
    }

    #[test]
    fn subset_leaves_other_relations_out() {
        let ds = tiny();
        let cfg = TrainConfig {
            relation_subset: Some([Relation::ObjInLoc].into_iter().collect()),
            ..quick()
        };
        let (theta, _) = train::<f32>(&ds, &cfg).unwrap();
        assert!(theta.has_relation(Relation::ObjInLoc));
        assert!(!theta.has_relation(Relation::ObjUsedTo));
    }
}

//! Link-prediction metrics over head- and tail-replacement queries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EmbeddingSet, KgeError};
use crate::kg::{Catalog, EntityId, Relation, Triple, TripleIndex, TripleKey};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    /// Other known positives are dropped from the candidate list.
    Filtered,
    Raw,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Filtered => "filtered",
            Protocol::Raw => "raw",
        })
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "filtered" => Ok(Protocol::Filtered),
            "raw" => Ok(Protocol::Raw),
            other => Err(format!("unknown protocol `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mrr: f64,
    pub hits1: f64,
    pub hits10: f64,
    pub queries: usize,
}

/// Expected MRR of uniformly random scores, with the standard deviation of
/// the mean over the same queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomBaseline {
    pub mrr: f64,
    pub sigma: f64,
}

/// One ranking query: the answer plus every competing candidate.
struct Case {
    answer: EntityId,
    others: Vec<EntityId>,
    tails: bool,
    key: TripleKey,
}

fn candidates(catalog: &Catalog, r: Relation, tails: bool) -> Vec<EntityId> {
    let kinds = if tails { r.tail_kinds() } else { r.head_kinds() };
    let mut ids: Vec<EntityId> = kinds.iter().flat_map(|k| catalog.of_kind(*k)).collect();
    ids.sort_unstable();
    ids
}

fn cases(catalog: &Catalog, split: &[Triple], known: &TripleIndex, protocol: Protocol) -> Vec<Case> {
    let mut out = Vec::with_capacity(split.len() * 2);
    for t in split {
        let key = t.key();
        for tails in [false, true] {
            let answer = if tails { key.tail } else { key.head };
            let others = candidates(catalog, key.relation, tails)
                .into_iter()
                .filter(|c| *c != answer)
                .filter(|c| {
                    let probe = if tails {
                        TripleKey::new(key.head, key.relation, *c)
                    } else {
                        TripleKey::new(*c, key.relation, key.tail)
                    };
                    protocol == Protocol::Raw || !known.contains(&probe)
                })
                .collect();
            out.push(Case {
                answer,
                others,
                tails,
                key,
            });
        }
    }
    out
}

/// Rank `1 + #better + #equal/2`; a relation without a map ties every
/// candidate.
fn rank_of<T: Scalar>(theta: &EmbeddingSet<T>, case: &Case) -> Result<f64, KgeError> {
    let k = case.key;
    if !theta.has_relation(k.relation) {
        return Ok(1.0 + case.others.len() as f64 / 2.0);
    }
    let score = |e: EntityId| {
        if case.tails {
            theta.score(k.head, k.relation, e)
        } else {
            theta.score(e, k.relation, k.tail)
        }
    };
    let own = score(case.answer)?;
    let (mut better, mut equal) = (0usize, 0usize);
    for c in &case.others {
        let s = score(*c)?;
        if s > own {
            better += 1;
        } else if s == own {
            equal += 1;
        }
    }
    Ok(1.0 + better as f64 + equal as f64 / 2.0)
}

pub fn evaluate<T: Scalar>(
    theta: &EmbeddingSet<T>,
    split: &[Triple],
    known: &TripleIndex,
    protocol: Protocol,
) -> Result<Metrics, KgeError> {
    if split.is_empty() {
        return Err(KgeError::EmptySplit);
    }
    let cases = cases(theta.catalog(), split, known, protocol);
    let (mut rr, mut h1, mut h10) = (0.0, 0.0, 0.0);
    for case in &cases {
        let rank = rank_of(theta, case)?;
        rr += 1.0 / rank;
        h1 += f64::from(u8::from(rank <= 1.0));
        h10 += f64::from(u8::from(rank <= 10.0));
    }
    let n = cases.len() as f64;
    Ok(Metrics {
        mrr: rr / n,
        hits1: h1 / n,
        hits10: h10 / n,
        queries: cases.len(),
    })
}

/// `E[1/rank] = H_N / N` per query with `N` candidates, uniform rank.
pub fn random_baseline(
    catalog: &Catalog,
    split: &[Triple],
    known: &TripleIndex,
    protocol: Protocol,
) -> RandomBaseline {
    let cases = cases(catalog, split, known, protocol);
    let (mut mean, mut var) = (0.0, 0.0);
    for case in &cases {
        let n = case.others.len() + 1;
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        let h2: f64 = (1..=n).map(|k| 1.0 / (k * k) as f64).sum();
        let m = h / n as f64;
        mean += m;
        var += h2 / n as f64 - m * m;
    }
    let q = cases.len().max(1) as f64;
    RandomBaseline {
        mrr: mean / q,
        sigma: var.sqrt() / q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::EntityKind;
    use crate::kge::BlockStructure;

    #[test]
    fn hand_built_memorizer_is_perfect() {
        let mut c = Catalog::new();
        let cup = c.add("cup", EntityKind::Object).unwrap();
        let mug = c.add("mug", EntityKind::Object).unwrap();
        let sink = c.add("sink", EntityKind::Location).unwrap();
        let shelf = c.add("shelf", EntityKind::Location).unwrap();
        let theta = EmbeddingSet::<f64>::from_parts(
            c,
            BlockStructure::new(2, 0),
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![(Relation::ObjInLoc, vec![1.0, 1.0])],
        )
        .unwrap();
        let split = vec![
            Triple::new(cup, Relation::ObjInLoc, sink, 1),
            Triple::new(mug, Relation::ObjInLoc, shelf, 1),
        ];
        let known = TripleIndex::new(split.iter().map(Triple::key));
        for p in [Protocol::Filtered, Protocol::Raw] {
            let m = evaluate(&theta, &split, &known, p).unwrap();
            assert_eq!((m.mrr, m.hits1, m.queries), (1.0, 1.0, 4));
        }
    }

    #[test]
    fn missing_relation_ties_everything() {
        let mut c = Catalog::new();
        let cup = c.add("cup", EntityKind::Object).unwrap();
        let sink = c.add("sink", EntityKind::Location).unwrap();
        c.add("shelf", EntityKind::Location).unwrap();
        let theta = EmbeddingSet::<f64>::random(&c, BlockStructure::new(2, 0), &[], 1);
        let split = vec![Triple::new(cup, Relation::ObjInLoc, sink, 1)];
        let known = TripleIndex::new(split.iter().map(Triple::key));
        let m = evaluate(&theta, &split, &known, Protocol::Raw).unwrap();
        // Head query: one candidate, rank 1. Tail query: two tied, rank 1.5.
        assert!((m.mrr - (1.0 + 1.0 / 1.5) / 2.0).abs() < 1e-12);
        let b = random_baseline(&c, &split, &known, Protocol::Raw);
        assert!((b.mrr - (1.0 + 0.75) / 2.0).abs() < 1e-12);
    }
}

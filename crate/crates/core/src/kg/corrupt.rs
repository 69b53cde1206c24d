//! Filtered negative sampling.

use std::collections::HashSet;

use rand::Rng;

use super::{Catalog, Dataset, EntityId, EntityKind, Relation, TripleIndex, TripleKey};
use crate::rng::stream;

/// Negatives for one positive triple. `short` is set when fewer than the
/// requested number of distinct negatives exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corruption {
    pub negatives: Vec<TripleKey>,
    pub short: bool,
}

/// Same-kind replacement pools per relation side.
#[derive(Debug, Clone)]
pub struct Corruptor {
    heads: Vec<Vec<EntityId>>,
    tails: Vec<Vec<EntityId>>,
}

fn pool(catalog: &Catalog, kinds: &[EntityKind]) -> Vec<EntityId> {
    let mut ids: Vec<EntityId> = kinds.iter().flat_map(|k| catalog.of_kind(*k)).collect();
    ids.sort_unstable();
    ids
}

impl Corruptor {
    pub fn new(catalog: &Catalog) -> Self {
        Self {
            heads: Relation::ALL
                .iter()
                .map(|r| pool(catalog, r.head_kinds()))
                .collect(),
            tails: Relation::ALL
                .iter()
                .map(|r| pool(catalog, r.tail_kinds()))
                .collect(),
        }
    }

    pub fn head_pool(&self, r: Relation) -> &[EntityId] {
        &self.heads[r.index()]
    }

    pub fn tail_pool(&self, r: Relation) -> &[EntityId] {
        &self.tails[r.index()]
    }

    /// Up to `n` distinct negatives of `positive`, none of them in `known`.
    ///
    /// Each draw flips a fair coin to replace the head or the tail with a
    /// uniformly chosen entity of the same kind. When rejection sampling
    /// stalls, the remaining negatives are drawn from the exhaustive list.
    pub fn corrupt<R: Rng>(
        &self,
        positive: TripleKey,
        known: &TripleIndex,
        n: usize,
        rng: &mut R,
    ) -> Corruption {
        let r = positive.relation;
        let heads = self.head_pool(r);
        let tails = self.tail_pool(r);
        let mut seen: HashSet<TripleKey> = HashSet::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        let valid = |k: &TripleKey| *k != positive && !known.contains(k);

        let budget = 10 * n + 50;
        for _ in 0..budget {
            if out.len() == n {
                break;
            }
            let candidate = if rng.random_bool(0.5) {
                TripleKey::new(heads[rng.random_range(0..heads.len())], r, positive.tail)
            } else {
                TripleKey::new(positive.head, r, tails[rng.random_range(0..tails.len())])
            };
            if valid(&candidate) && seen.insert(candidate) {
                out.push(candidate);
            }
        }
        if out.len() == n {
            return Corruption {
                negatives: out,
                short: false,
            };
        }

        let mut rest: Vec<TripleKey> = heads
            .iter()
            .map(|h| TripleKey::new(*h, r, positive.tail))
            .chain(tails.iter().map(|t| TripleKey::new(positive.head, r, *t)))
            .filter(|k| valid(k) && !seen.contains(k))
            .collect();
        rest.sort_unstable();
        rest.dedup();
        while out.len() < n && !rest.is_empty() {
            let i = rng.random_range(0..rest.len());
            out.push(rest.swap_remove(i));
        }
        let short = out.len() < n;
        Corruption {
            negatives: out,
            short,
        }
    }
}

impl Dataset {
    /// Filtered corruption against every split of the dataset.
    pub fn corrupt(&self, positive: TripleKey, n: usize, seed: u64) -> Corruption {
        let mut rng = stream(seed, &[0xc0_22, positive.head.0 as u64, positive.tail.0 as u64]);
        Corruptor::new(self.catalog()).corrupt(positive, self.known(), n, &mut rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{parse_triples, Triple};

    #[test]
    fn negatives_respect_kinds_and_filter() {
        let text = "cup\tObjInLoc\tcabinet\t12\ttrain\ncup\tObjInLoc\tsink\t2\tvalid\nplate\tObjInLoc\tcabinet\t1\ttest\n";
        let ds = parse_triples(text, None).unwrap();
        let pos = ds.train()[0].key();
        let c = ds.corrupt(pos, 6, 11);
        assert_eq!(c.negatives.len(), 6);
        assert!(!c.short);
        let cat = ds.catalog();
        for k in &c.negatives {
            assert!(!ds.contains(k));
            assert_eq!(cat.kind(k.head), EntityKind::Object);
            assert_eq!(cat.kind(k.tail), EntityKind::Location);
            assert!(k.head == pos.head || k.tail == pos.tail);
        }
        let distinct: HashSet<_> = c.negatives.iter().collect();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn small_pool_returns_short_list() {
        let mut cat = Catalog::new();
        let a = cat.add("open", EntityKind::Action).unwrap();
        let b = cat.add("close", EntityKind::Action).unwrap();
        let c = cat.add("fill", EntityKind::Action).unwrap();
        let ds = Dataset::new(
            cat,
            vec![Triple::new(a, Relation::InverseActionOf, b, 1)],
            vec![],
            vec![],
        )
        .unwrap();
        // Self-loops are false triples too, so both sides offer two negatives.
        let out = ds.corrupt(ds.train()[0].key(), 10, 1);
        assert!(out.short);
        assert_eq!(out.negatives.len(), 4);
        assert!(out
            .negatives
            .contains(&TripleKey::new(b, Relation::InverseActionOf, b)));
        assert!(out
            .negatives
            .contains(&TripleKey::new(c, Relation::InverseActionOf, b)));
        assert!(out
            .negatives
            .contains(&TripleKey::new(a, Relation::InverseActionOf, c)));
    }
}

use std::collections::{BTreeMap, HashMap};

use super::{Catalog, KgError, Relation, Split, Triple, TripleIndex, TripleKey};

/// Train/valid/test splits over a shared catalog.
///
/// Splits are pairwise disjoint on `(h, r, t)`; every triple passes its
/// relation's kind signature and carries a positive weight.
#[derive(Debug, Clone)]
pub struct Dataset {
    catalog: Catalog,
    train: Vec<Triple>,
    valid: Vec<Triple>,
    test: Vec<Triple>,
    membership: HashMap<TripleKey, Split>,
    known: TripleIndex,
}

impl Dataset {
    pub fn new(
        catalog: Catalog,
        train: Vec<Triple>,
        valid: Vec<Triple>,
        test: Vec<Triple>,
    ) -> Result<Self, KgError> {
        let mut membership = HashMap::with_capacity(train.len() + valid.len() + test.len());
        for (split, triples) in [
            (Split::Train, &train),
            (Split::Valid, &valid),
            (Split::Test, &test),
        ] {
            for t in triples.iter() {
                t.validate(&catalog)?;
                if let Some(prev) = membership.insert(t.key(), split) {
                    return Err(if prev == split {
                        KgError::DuplicateTriple(describe(&catalog, &t.key()))
                    } else {
                        KgError::SplitOverlap(describe(&catalog, &t.key()))
                    });
                }
            }
        }
        let known = TripleIndex::new(membership.keys().copied());
        Ok(Self {
            catalog,
            train,
            valid,
            test,
            membership,
            known,
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn train(&self) -> &[Triple] {
        &self.train
    }

    pub fn valid(&self) -> &[Triple] {
        &self.valid
    }

    pub fn test(&self) -> &[Triple] {
        &self.test
    }

    pub fn split(&self, split: Split) -> &[Triple] {
        match split {
            Split::Train => &self.train,
            Split::Valid => &self.valid,
            Split::Test => &self.test,
        }
    }

    pub fn split_of(&self, key: &TripleKey) -> Option<Split> {
        self.membership.get(key).copied()
    }

    /// Index over `train ∪ valid ∪ test`.
    pub fn known(&self) -> &TripleIndex {
        &self.known
    }

    pub fn contains(&self, key: &TripleKey) -> bool {
        self.membership.contains_key(key)
    }

    pub fn train_index(&self) -> TripleIndex {
        TripleIndex::new(self.train.iter().map(Triple::key))
    }

    /// Unique counts per relation for each split, in relation order.
    pub fn counts(&self) -> BTreeMap<Relation, [usize; 3]> {
        let mut out: BTreeMap<Relation, [usize; 3]> =
            Relation::ALL.iter().map(|r| (*r, [0; 3])).collect();
        for (i, split) in Split::ALL.iter().enumerate() {
            for t in self.split(*split) {
                out.get_mut(&t.relation).expect("all relations seeded")[i] += 1;
            }
        }
        out
    }

    /// Total observation count of the train split per relation.
    pub fn train_instances(&self) -> BTreeMap<Relation, u64> {
        let mut out = BTreeMap::new();
        for t in &self.train {
            *out.entry(t.relation).or_insert(0) += u64::from(t.weight);
        }
        out
    }

    /// The closed-world knowledge graph made of every split.
    pub fn to_ground_truth(&self) -> GroundTruth {
        let keys = self.membership.keys().copied().collect();
        GroundTruth::new(self.catalog.clone(), keys)
            .expect("dataset triples were validated on construction")
    }
}

/// The full set of true facts used by the simulator.
///
/// Closed world: any `(h, r, t)` absent from the graph is false.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    catalog: Catalog,
    triples: Vec<TripleKey>,
    index: TripleIndex,
    pub closed_world: bool,
}

impl GroundTruth {
    pub fn new(catalog: Catalog, mut triples: Vec<TripleKey>) -> Result<Self, KgError> {
        triples.sort_unstable();
        triples.dedup();
        for k in &triples {
            Triple::new(k.head, k.relation, k.tail, 1).validate(&catalog)?;
        }
        let index = TripleIndex::new(triples.iter().copied());
        Ok(Self {
            catalog,
            triples,
            index,
            closed_world: true,
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// All facts in `(head, relation, tail)` order.
    pub fn triples(&self) -> &[TripleKey] {
        &self.triples
    }

    pub fn index(&self) -> &TripleIndex {
        &self.index
    }

    pub fn holds(&self, head: super::EntityId, relation: Relation, tail: super::EntityId) -> bool {
        self.index.holds(head, relation, tail)
    }

    pub fn tails(&self, head: super::EntityId, relation: Relation) -> &[super::EntityId] {
        self.index.tails(head, relation)
    }

    pub fn heads(&self, relation: Relation, tail: super::EntityId) -> &[super::EntityId] {
        self.index.heads(relation, tail)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<Relation, usize> {
        super::count_by_relation(self.triples.iter())
    }
}

pub(crate) fn describe(catalog: &Catalog, key: &TripleKey) -> String {
    let name = |id| {
        catalog
            .get(id)
            .map(|e| e.name.clone())
            .unwrap_or_else(|| id.to_string())
    };
    format!("({}, {}, {})", name(key.head), key.relation, name(key.tail))
}

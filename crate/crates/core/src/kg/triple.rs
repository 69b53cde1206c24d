use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Catalog, EntityId, KgError, Relation};

/// `(head, relation, tail)` without a weight; the identity of a fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TripleKey {
    pub head: EntityId,
    pub relation: Relation,
    pub tail: EntityId,
}

impl TripleKey {
    pub fn new(head: EntityId, relation: Relation, tail: EntityId) -> Self {
        Self {
            head,
            relation,
            tail,
        }
    }
}

/// A fact with its observation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub head: EntityId,
    pub relation: Relation,
    pub tail: EntityId,
    pub weight: u32,
}

impl Triple {
    pub fn new(head: EntityId, relation: Relation, tail: EntityId, weight: u32) -> Self {
        Self {
            head,
            relation,
            tail,
            weight,
        }
    }

    pub fn key(&self) -> TripleKey {
        TripleKey::new(self.head, self.relation, self.tail)
    }

    /// Checks weight positivity and the relation's kind signature.
    pub fn validate(&self, catalog: &Catalog) -> Result<(), KgError> {
        if self.weight == 0 {
            return Err(KgError::ZeroWeight);
        }
        let head = catalog
            .get(self.head)
            .ok_or_else(|| KgError::UnknownEntity(self.head.to_string()))?;
        let tail = catalog
            .get(self.tail)
            .ok_or_else(|| KgError::UnknownEntity(self.tail.to_string()))?;
        if !self.relation.admits(head.kind, tail.kind) {
            return Err(KgError::KindSignature {
                relation: self.relation,
                head: head.name.clone(),
                head_kind: head.kind,
                tail: tail.name.clone(),
                tail_kind: tail.kind,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            other => Err(KgError::UnknownSplit(other.to_string())),
        }
    }
}

/// Per-relation adjacency over a set of facts.
#[derive(Debug, Clone, Default)]
pub struct TripleIndex {
    keys: HashSet<TripleKey>,
    tails: HashMap<(EntityId, Relation), Vec<EntityId>>,
    heads: HashMap<(Relation, EntityId), Vec<EntityId>>,
}

impl TripleIndex {
    pub fn new<I: IntoIterator<Item = TripleKey>>(keys: I) -> Self {
        let mut index = TripleIndex::default();
        for k in keys {
            index.insert(k);
        }
        for v in index.tails.values_mut() {
            v.sort_unstable();
        }
        for v in index.heads.values_mut() {
            v.sort_unstable();
        }
        index
    }

    fn insert(&mut self, k: TripleKey) {
        if self.keys.insert(k) {
            self.tails.entry((k.head, k.relation)).or_default().push(k.tail);
            self.heads.entry((k.relation, k.tail)).or_default().push(k.head);
        }
    }

    pub fn contains(&self, key: &TripleKey) -> bool {
        self.keys.contains(key)
    }

    pub fn holds(&self, head: EntityId, relation: Relation, tail: EntityId) -> bool {
        self.keys.contains(&TripleKey::new(head, relation, tail))
    }

    /// Sorted tails `t` with `(head, relation, t)` in the index.
    pub fn tails(&self, head: EntityId, relation: Relation) -> &[EntityId] {
        self.tails
            .get(&(head, relation))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Sorted heads `h` with `(h, relation, tail)` in the index.
    pub fn heads(&self, relation: Relation, tail: EntityId) -> &[EntityId] {
        self.heads
            .get(&(relation, tail))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// Per-relation unique-triple counts for reporting.
pub fn count_by_relation<'a, I>(triples: I) -> BTreeMap<Relation, usize>
where
    I: IntoIterator<Item = &'a TripleKey>,
{
    let mut counts = BTreeMap::new();
    for k in triples {
        *counts.entry(k.relation).or_insert(0) += 1;
    }
    counts
}

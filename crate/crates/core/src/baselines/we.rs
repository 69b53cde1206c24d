//! Word-vector nearest neighbours. Relation-blind by construction: every
//! query is a cosine ranking around a single anchor token.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use super::BaselineError;
use crate::kg::vocab::{semantic_groups, ObjectGroup, SemanticGroup, Zone};
use crate::kg::{Catalog, EntityId, EntityKind};
use crate::rng::stream;
use crate::taskgen::KnowledgeSource;
use crate::world::{LocationSlot, WorldState};

const CONCEPT_PREFIX: &str = "/c/en/";

/// Token to unit vector. Zero vectors are rejected at insertion.
#[derive(Debug, Clone, Default)]
pub struct WordVectorTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

/// Catalog entities with and without a vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub covered: usize,
    pub missing: Vec<String>,
}

fn normalize(token: &str, mut v: Vec<f64>) -> Result<Vec<f64>, BaselineError> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(BaselineError::ZeroVector(token.to_string()));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl WordVectorTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn insert(&mut self, token: &str, v: Vec<f64>) -> Result<(), BaselineError> {
        if v.len() != self.dim {
            return Err(BaselineError::Dimension {
                token: token.to_string(),
                found: v.len(),
                expected: self.dim,
            });
        }
        let v = normalize(token, v)?;
        self.vectors.insert(token.to_string(), v);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    /// Cosine similarity of two covered tokens.
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        Some(dot(self.get(a)?, self.get(b)?))
    }

    pub fn coverage(&self, catalog: &Catalog) -> Coverage {
        let missing: Vec<String> = catalog
            .entities()
            .iter()
            .filter(|e| !self.vectors.contains_key(&e.name))
            .map(|e| e.name.clone())
            .collect();
        Coverage {
            covered: catalog.len() - missing.len(),
            missing,
        }
    }

    /// `token v1 ... vd` per line with an optional `count dim` header.
    /// ConceptNet-style `/c/en/` prefixes are stripped.
    pub fn parse(text: &str) -> Result<Self, BaselineError> {
        let mut table: Option<WordVectorTable> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if line == 1 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
                table = Some(WordVectorTable::new(fields[1].parse().unwrap_or(0)));
                continue;
            }
            let token = fields[0].strip_prefix(CONCEPT_PREFIX).unwrap_or(fields[0]);
            let values = fields[1..]
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| BaselineError::Malformed {
                    line,
                    reason: e.to_string(),
                })?;
            let t = table.get_or_insert_with(|| WordVectorTable::new(values.len()));
            t.insert(token, values).map_err(|e| BaselineError::Malformed {
                line,
                reason: e.to_string(),
            })?;
        }
        table.ok_or(BaselineError::Malformed {
            line: 0,
            reason: "no vectors".into(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, BaselineError> {
        let text = fs::read_to_string(path).map_err(|e| BaselineError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    /// Header line then one row per token, sorted by token.
    pub fn to_text(&self) -> String {
        let mut tokens: Vec<&String> = self.vectors.keys().collect();
        tokens.sort();
        let mut out = format!("{} {}\n", tokens.len(), self.dim);
        for t in tokens {
            out.push_str(t);
            for x in &self.vectors[t] {
                out.push_str(&format!(" {x:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Distributional stand-in for a pretrained embedding: each semantic group
/// has a random centroid, objects lean toward the zones they are kept in,
/// and every token gets isotropic noise of relative size `noise`.
pub fn synthetic_word_vectors(catalog: &Catalog, seed: u64, dim: usize, noise: f64) -> WordVectorTable {
    let mut centroid_rng = stream(seed, &[0x3e_c7]);
    let scale = 1.0 / (dim as f64).sqrt();
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) * scale).collect()
    };
    let mut centroids: HashMap<SemanticGroup, Vec<f64>> = HashMap::new();
    let mut keys: Vec<SemanticGroup> = vec![SemanticGroup::Room, SemanticGroup::State];
    keys.extend(Zone::ALL.iter().map(|z| SemanticGroup::Zone(*z)));
    keys.extend(ObjectGroup::ALL.iter().map(|g| SemanticGroup::Object(*g)));
    let groups = semantic_groups(catalog);
    let mut extra: Vec<SemanticGroup> = groups.iter().copied().filter(|g| !keys.contains(g)).collect();
    extra.sort();
    extra.dedup();
    keys.extend(extra);
    for k in keys {
        let c = draw(&mut centroid_rng);
        centroids.insert(k, c);
    }

    let mut table = WordVectorTable::new(dim);
    for (e, group) in catalog.entities().iter().zip(&groups) {
        let mut v = centroids[group].clone();
        if let SemanticGroup::Object(g) = group {
            let zones = g.home_zones();
            let total: f64 = zones.iter().map(|(_, w)| *w as f64).sum();
            for (z, w) in zones {
                let c = &centroids[&SemanticGroup::Zone(*z)];
                let k = 0.5 * *w as f64 / total;
                v.iter_mut().zip(c).for_each(|(x, y)| *x += k * y);
            }
        }
        let mut rng = stream(seed, &[0x70_4e, e.id.0 as u64]);
        let eps = draw(&mut rng);
        v.iter_mut().zip(&eps).for_each(|(x, y)| *x += noise * y);
        table
            .insert(&e.name, v)
            .expect("gaussian draws are never all zero");
    }
    table
}

/// Candidates sorted by cosine to `anchor`, highest first, ties by
/// position in `candidates`; uncovered candidates follow in input order
/// with `None`. An uncovered anchor yields an empty ranking.
pub fn we_query<K: Copy>(
    table: &WordVectorTable,
    anchor: &str,
    candidates: &[(K, &str)],
) -> Vec<(K, Option<f64>)> {
    let Some(a) = table.get(anchor) else {
        log::warn!("word vectors lack anchor `{anchor}`");
        return Vec::new();
    };
    let mut covered: Vec<(usize, K, f64)> = Vec::new();
    let mut uncovered: Vec<(K, Option<f64>)> = Vec::new();
    for (i, (k, token)) in candidates.iter().enumerate() {
        match table.get(token) {
            // `+ 0.0` folds -0 into +0 so orthogonal candidates tie exactly.
            Some(v) => covered.push((i, *k, dot(a, v) + 0.0)),
            None => uncovered.push((*k, None)),
        }
    }
    covered.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)));
    covered
        .into_iter()
        .map(|(_, k, s)| (k, Some(s)))
        .chain(uncovered)
        .collect()
}

pub struct WordVectorSource<'a> {
    table: &'a WordVectorTable,
    catalog: &'a Catalog,
    objects: Vec<EntityId>,
    actions: Vec<EntityId>,
}

impl<'a> WordVectorSource<'a> {
    pub fn new(table: &'a WordVectorTable, catalog: &'a Catalog) -> Self {
        Self {
            table,
            catalog,
            objects: catalog.of_kind(EntityKind::Object),
            actions: catalog.of_kind(EntityKind::Action),
        }
    }

    fn rank_entities(&self, anchor: EntityId, pool: &[EntityId], skip: &[EntityId], limit: usize) -> Vec<EntityId> {
        let cands: Vec<(EntityId, &str)> = pool
            .iter()
            .filter(|c| !skip.contains(c))
            .map(|c| (*c, self.catalog.name(*c)))
            .collect();
        we_query(self.table, self.catalog.name(anchor), &cands)
            .into_iter()
            .take(limit)
            .map(|(c, _)| c)
            .collect()
    }
}

impl KnowledgeSource for WordVectorSource<'_> {
    fn name(&self) -> &str {
        "we"
    }

    fn locations_for(&self, object: EntityId, env: &WorldState, limit: usize) -> Vec<LocationSlot> {
        let cands: Vec<(LocationSlot, &str)> = env
            .locations()
            .iter()
            .map(|l| (l.slot, self.catalog.name(l.slot.class)))
            .collect();
        we_query(self.table, self.catalog.name(object), &cands)
            .into_iter()
            .take(limit)
            .map(|(s, _)| s)
            .collect()
    }

    fn objects_for(&self, _action: EntityId, target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId> {
        self.rank_entities(failed, &self.objects, &[failed, target], limit)
    }

    fn actions_for(&self, _effect: EntityId, _target: EntityId, failed: EntityId, limit: usize) -> Vec<EntityId> {
        self.rank_entities(failed, &self.actions, &[failed], limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::default_catalog;

    #[test]
    fn parse_strips_prefix_normalizes_and_skips_header() {
        let t = WordVectorTable::parse("3 2\n/c/en/cup 3 4\nsink 0 2\nrag 1 0\n").unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.get("cup").unwrap(), &[0.6, 0.8]);
        assert_eq!(t.get("sink").unwrap(), &[0.0, 1.0]);
        assert!(t.get("/c/en/cup").is_none());
    }

    #[test]
    fn zero_and_ragged_vectors_rejected() {
        assert!(WordVectorTable::parse("cup 0 0\n").is_err());
        assert!(WordVectorTable::parse("cup 1 0\nsink 1\n").is_err());
        assert!(WordVectorTable::parse("cup 1 x\n").is_err());
    }

    #[test]
    fn identical_token_ranks_first_and_ties_keep_order() {
        let t = WordVectorTable::parse("a 1 0\nb 0 1\nc 0 -1\nd 1 0\n").unwrap();
        let got = we_query(&t, "a", &[(0, "b"), (1, "zz"), (2, "c"), (3, "d"), (4, "b")]);
        let order: Vec<i32> = got.iter().map(|(k, _)| *k).collect();
        assert_eq!(order, vec![3, 0, 2, 4, 1]);
        assert_eq!(got[0].1, Some(1.0));
        assert_eq!(got[4].1, None);
        assert!(we_query(&t, "nope", &[(0, "a")]).is_empty());
    }

    #[test]
    fn ranking_matches_brute_force_cosine() {
        let c = default_catalog();
        let t = synthetic_word_vectors(&c, 3, 16, 0.7);
        let names: Vec<&str> = c.entities().iter().map(|e| e.name.as_str()).collect();
        let cands: Vec<(usize, &str)> = names.iter().copied().enumerate().collect();
        let got = we_query(&t, "sponge", &cands);
        let a = t.get("sponge").unwrap();
        let mut brute: Vec<(usize, f64)> = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let v = t.get(n).unwrap();
                let cos = dot(a, v) / (dot(a, a).sqrt() * dot(v, v).sqrt());
                (i, cos)
            })
            .collect();
        brute.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
        assert_eq!(got.len(), brute.len());
        for ((_, gs), (_, bs)) in got.iter().zip(&brute) {
            assert!((gs.unwrap() - bs).abs() < 1e-12);
        }
        assert_eq!(got[0].0, c.lookup("sponge").unwrap().index());
    }

    #[test]
    fn synthetic_vectors_cover_catalog_and_round_trip() {
        let c = default_catalog();
        let t = synthetic_word_vectors(&c, 1, 24, 0.6);
        let cov = t.coverage(&c);
        assert_eq!(cov.covered, c.len());
        assert!(cov.missing.is_empty());
        for e in c.entities() {
            let v = t.get(&e.name).unwrap();
            assert!((dot(v, v) - 1.0).abs() < 1e-12);
        }
        let back = WordVectorTable::parse(&t.to_text()).unwrap();
        assert_eq!(back.len(), t.len());
        assert!((back.similarity("rag", "towel").unwrap() - t.similarity("rag", "towel").unwrap()).abs() < 1e-4);
        // Same-group tokens sit closer than cross-group ones on average.
        assert!(t.similarity("rag", "towel").unwrap() > t.similarity("rag", "kitchen").unwrap());
    }
}

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use super::blocks::{self, BlockDiagonalMap, BlockStructure};
use super::KgeError;
use crate::kg::{Catalog, EntityId, Relation};
use crate::rng::stream;
use crate::scalar::Scalar;

/// Entity vectors and relation maps. Entity rows are indexed by
/// [`EntityId`]; relations not present in the set have no map.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet<T> {
    catalog: Catalog,
    structure: BlockStructure,
    entities: Vec<T>,
    relations: Vec<Option<Vec<T>>>,
}

impl<T: Scalar> EmbeddingSet<T> {
    /// Entities uniform in `±6/sqrt(d)`, maps at identity plus N(0, 0.01).
    pub fn random(
        catalog: &Catalog,
        structure: BlockStructure,
        relations: &[Relation],
        seed: u64,
    ) -> Self {
        let d = structure.dim();
        let bound = 6.0 / (d as f64).sqrt();
        let mut rng = stream(seed, &[0x1417]);
        let uniform = Uniform::new_inclusive(-bound, bound).expect("finite bound");
        let entities = (0..catalog.len() * d)
            .map(|_| T::of(uniform.sample(&mut rng)))
            .collect();
        let noise = Normal::new(0.0, 0.01).expect("valid std");
        let mut maps = vec![None; Relation::ALL.len()];
        for r in Relation::ALL {
            if !relations.contains(&r) {
                continue;
            }
            let mut rng = stream(seed, &[0x4e1a, r.index() as u64]);
            let mut w = BlockDiagonalMap::<T>::identity(structure).params;
            for x in w.iter_mut() {
                *x += T::of(noise.sample(&mut rng));
            }
            maps[r.index()] = Some(w);
        }
        Self {
            catalog: catalog.clone(),
            structure,
            entities,
            relations: maps,
        }
    }

    /// Builds a set from explicit rows, checking shapes and finiteness.
    pub fn from_parts(
        catalog: Catalog,
        structure: BlockStructure,
        entities: Vec<Vec<T>>,
        relations: Vec<(Relation, Vec<T>)>,
    ) -> Result<Self, KgeError> {
        let d = structure.dim();
        if entities.len() != catalog.len() {
            return Err(KgeError::Shape(format!(
                "{} entity rows for a catalog of {}",
                entities.len(),
                catalog.len()
            )));
        }
        if let Some(row) = entities.iter().chain(relations.iter().map(|(_, w)| w)).find(|v| v.len() != d) {
            return Err(KgeError::Shape(format!("row of length {} in dimension {d}", row.len())));
        }
        let mut maps = vec![None; Relation::ALL.len()];
        for (r, w) in relations {
            if maps[r.index()].replace(w).is_some() {
                return Err(KgeError::Shape(format!("relation {r} given twice")));
            }
        }
        let set = Self {
            catalog,
            structure,
            entities: entities.into_iter().flatten().collect(),
            relations: maps,
        };
        if !set.is_finite() {
            return Err(KgeError::NonFinite);
        }
        Ok(set)
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn structure(&self) -> BlockStructure {
        self.structure
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn entity(&self, id: EntityId) -> Result<&[T], KgeError> {
        let d = self.dim();
        let i = id.index();
        if i >= self.catalog.len() {
            return Err(KgeError::UnknownEntity(id));
        }
        Ok(&self.entities[i * d..(i + 1) * d])
    }

    #[cfg(test)]
    pub(crate) fn entity_mut(&mut self, id: EntityId) -> &mut [T] {
        let d = self.dim();
        let i = id.index();
        &mut self.entities[i * d..(i + 1) * d]
    }

    pub fn relation(&self, r: Relation) -> Result<&[T], KgeError> {
        self.relations[r.index()]
            .as_deref()
            .ok_or(KgeError::UnknownRelation(r))
    }

    pub fn relation_map(&self, r: Relation) -> Result<BlockDiagonalMap<T>, KgeError> {
        Ok(BlockDiagonalMap::from_params(self.structure, self.relation(r)?.to_vec()))
    }

    pub fn has_relation(&self, r: Relation) -> bool {
        self.relations[r.index()].is_some()
    }

    /// Relations with a map, in canonical order.
    pub fn relations(&self) -> Vec<Relation> {
        Relation::ALL
            .into_iter()
            .filter(|r| self.has_relation(*r))
            .collect()
    }

    /// `<v_h^T W_r, v_t>`.
    pub fn score(&self, h: EntityId, r: Relation, t: EntityId) -> Result<T, KgeError> {
        Ok(blocks::bilinear(
            self.structure,
            self.relation(r)?,
            self.entity(h)?,
            self.entity(t)?,
        ))
    }

    /// The same parameters in another precision.
    pub fn cast<U: Scalar>(&self) -> EmbeddingSet<U> {
        let conv = |v: &[T]| v.iter().map(|x| U::of(x.f64())).collect::<Vec<U>>();
        EmbeddingSet {
            catalog: self.catalog.clone(),
            structure: self.structure,
            entities: conv(&self.entities),
            relations: self.relations.iter().map(|r| r.as_deref().map(conv)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entities
            .iter()
            .chain(self.relations.iter().flatten().flatten())
            .all(|x| x.is_finite())
    }

    /// Largest normality and pairwise commutator residuals over all maps.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        let maps: Vec<BlockDiagonalMap<T>> = self
            .relations()
            .into_iter()
            .map(|r| self.relation_map(r).expect("listed relation"))
            .collect();
        let mut normal = 0.0f64;
        let mut commute = 0.0f64;
        for (i, x) in maps.iter().enumerate() {
            normal = normal.max(blocks::normality_residual(x));
            for y in &maps[i + 1..] {
                commute = commute.max(blocks::commutator_residual(x, y));
            }
        }
        (normal, commute)
    }

    /// Fills every parameter from `rng`, uniform in `±scale`. Test helper for
    /// building arbitrary sets.
    pub fn randomize<R: Rng>(&mut self, rng: &mut R, scale: f64) {
        for x in self
            .entities
            .iter_mut()
            .chain(self.relations.iter_mut().flatten().flatten())
        {
            *x = T::of(rng.random_range(-scale..=scale));
        }
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [T], &mut [Option<Vec<T>>]) {
        (&mut self.entities, &mut self.relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{default_catalog, EntityKind};

    #[test]
    fn zero_head_scores_zero() {
        let mut c = Catalog::new();
        let a = c.add("cup", EntityKind::Object).unwrap();
        let b = c.add("sink", EntityKind::Location).unwrap();
        let s = BlockStructure::new(2, 1);
        let set = EmbeddingSet::<f64>::from_parts(
            c,
            s,
            vec![vec![0.0; 4], vec![0.3, -1.0, 2.0, 0.5]],
            vec![(Relation::ObjInLoc, vec![1.2, -0.4, 0.9, 0.7])],
        )
        .unwrap();
        assert_eq!(set.score(a, Relation::ObjInLoc, b).unwrap(), 0.0);
        assert!(matches!(
            set.score(a, Relation::ObjOnLoc, b),
            Err(KgeError::UnknownRelation(Relation::ObjOnLoc))
        ));
        assert!(matches!(
            set.score(EntityId(9), Relation::ObjInLoc, b),
            Err(KgeError::UnknownEntity(_))
        ));
    }

    #[test]
    fn random_init_is_seeded_and_bounded() {
        let c = default_catalog();
        let s = BlockStructure::half_pairs(20);
        let x = EmbeddingSet::<f64>::random(&c, s, &Relation::ALL, 4);
        assert_eq!(x, EmbeddingSet::random(&c, s, &Relation::ALL, 4));
        assert_ne!(x, EmbeddingSet::random(&c, s, &Relation::ALL, 5));
        let bound = 6.0 / 20f64.sqrt();
        assert!(x.entities.iter().all(|v| v.abs() <= bound));
        let (n, m) = x.constraint_residuals();
        assert!(n < 1e-9 && m < 1e-9);
        let sub = EmbeddingSet::<f32>::random(&c, s, &[Relation::ObjInLoc], 4);
        assert_eq!(sub.relations(), vec![Relation::ObjInLoc]);
    }
}

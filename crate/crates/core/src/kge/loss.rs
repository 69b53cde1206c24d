//! Logistic loss `sum -log sigma(y_hat * f)` with `y_hat = 2y - 1`, and its
//! analytic gradient.

use std::collections::BTreeMap;

use super::blocks::bilinear_grad;
use super::{EmbeddingSet, KgeError};
use crate::kg::{EntityId, Relation, TripleKey};
use crate::scalar::{sigmoid, softplus, Scalar};

/// A triple with its label, `y = 1` for true and `y = 0` for corrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Labeled {
    pub key: TripleKey,
    pub y: u8,
}

impl Labeled {
    pub fn positive(key: TripleKey) -> Self {
        Self { key, y: 1 }
    }

    pub fn negative(key: TripleKey) -> Self {
        Self { key, y: 0 }
    }

    fn sign<T: Scalar>(&self) -> T {
        if self.y == 0 {
            -T::one()
        } else {
            T::one()
        }
    }
}

/// Sparse gradient: rows only for touched entities and relations.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient<T> {
    pub entities: BTreeMap<EntityId, Vec<T>>,
    pub relations: BTreeMap<Relation, Vec<T>>,
}

impl<T: Scalar> Gradient<T> {
    pub fn entity(&self, id: EntityId) -> Option<&[T]> {
        self.entities.get(&id).map(Vec::as_slice)
    }

    pub fn relation(&self, r: Relation) -> Option<&[T]> {
        self.relations.get(&r).map(Vec::as_slice)
    }
}

pub fn loss<T: Scalar>(theta: &EmbeddingSet<T>, batch: &[Labeled]) -> Result<T, KgeError> {
    let mut total = T::zero();
    for s in batch {
        let f = theta.score(s.key.head, s.key.relation, s.key.tail)?;
        total += softplus(-s.sign::<T>() * f);
    }
    Ok(total)
}

/// Loss and gradient in one pass.
pub fn loss_and_gradient<T: Scalar>(
    theta: &EmbeddingSet<T>,
    batch: &[Labeled],
) -> Result<(T, Gradient<T>), KgeError> {
    let d = theta.dim();
    let s = theta.structure();
    let mut grad = Gradient {
        entities: BTreeMap::new(),
        relations: BTreeMap::new(),
    };
    let mut total = T::zero();
    let mut gh = vec![T::zero(); d];
    let mut gt = vec![T::zero(); d];
    for sample in batch {
        let k = sample.key;
        let w = theta.relation(k.relation)?;
        let h = theta.entity(k.head)?;
        let t = theta.entity(k.tail)?;
        let y = sample.sign::<T>();
        let f = super::blocks::bilinear(s, w, h, t);
        total += softplus(-y * f);
        // d/df softplus(-y f) = -y sigma(-y f)
        let dl = -y * sigmoid(-y * f);
        gh.iter_mut().for_each(|x| *x = T::zero());
        gt.iter_mut().for_each(|x| *x = T::zero());
        let gw = grad
            .relations
            .entry(k.relation)
            .or_insert_with(|| vec![T::zero(); d]);
        bilinear_grad(s, w, h, t, dl, gw, &mut gh, &mut gt);
        for (id, g) in [(k.head, &gh), (k.tail, &gt)] {
            let row = grad.entities.entry(id).or_insert_with(|| vec![T::zero(); d]);
            row.iter_mut().zip(g.iter()).for_each(|(r, x)| *r += *x);
        }
    }
    Ok((total, grad))
}

pub fn gradient<T: Scalar>(
    theta: &EmbeddingSet<T>,
    batch: &[Labeled],
) -> Result<Gradient<T>, KgeError> {
    loss_and_gradient(theta, batch).map(|(_, g)| g)
}

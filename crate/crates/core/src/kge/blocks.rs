//! Almost-diagonal relation maps. Every map shares one block layout: `scalars`
//! 1x1 blocks followed by `pairs` 2x2 blocks of the form `[[a, -b], [b, a]]`.
//! Maps of this shape are normal and commute with each other.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    pub scalars: usize,
    pub pairs: usize,
}

impl BlockStructure {
    pub fn new(scalars: usize, pairs: usize) -> Self {
        Self { scalars, pairs }
    }

    /// Half of the coordinates in 2x2 blocks, rounded down to whole pairs.
    pub fn half_pairs(dim: usize) -> Self {
        let pairs = dim / 4;
        Self::new(dim - 2 * pairs, pairs)
    }

    pub fn dim(&self) -> usize {
        self.scalars + 2 * self.pairs
    }
}

/// One relation map as its `dim` free parameters: the scalar diagonal, then
/// `(a, b)` for each pair block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalMap<T> {
    pub structure: BlockStructure,
    pub params: Vec<T>,
}

impl<T: Scalar> BlockDiagonalMap<T> {
    pub fn identity(structure: BlockStructure) -> Self {
        let mut params = vec![T::one(); structure.scalars];
        for _ in 0..structure.pairs {
            params.push(T::one());
            params.push(T::zero());
        }
        Self { structure, params }
    }

    pub fn from_params(structure: BlockStructure, params: Vec<T>) -> Self {
        assert_eq!(params.len(), structure.dim(), "parameter count must equal dim");
        Self { structure, params }
    }

    /// Row-major dense matrix.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        dense(self.structure, &self.params)
    }
}

/// `<h^T W, t>` for a map given by its raw parameters.
#[inline]
pub fn bilinear<T: Scalar>(s: BlockStructure, w: &[T], h: &[T], t: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..s.scalars {
        acc += h[i] * w[i] * t[i];
    }
    for p in 0..s.pairs {
        let i = s.scalars + 2 * p;
        let (a, b) = (w[i], w[i + 1]);
        let (h1, h2, t1, t2) = (h[i], h[i + 1], t[i], t[i + 1]);
        acc += a * (h1 * t1 + h2 * t2) + b * (h2 * t1 - h1 * t2);
    }
    acc
}

/// Accumulates `scale * df/d(params)` into `gw`, `gh` and `gt`.
#[inline]
#[allow(clippy::too_many_arguments)]
pub fn bilinear_grad<T: Scalar>(
    s: BlockStructure,
    w: &[T],
    h: &[T],
    t: &[T],
    scale: T,
    gw: &mut [T],
    gh: &mut [T],
    gt: &mut [T],
) {
    for i in 0..s.scalars {
        gw[i] += scale * h[i] * t[i];
        gh[i] += scale * w[i] * t[i];
        gt[i] += scale * w[i] * h[i];
    }
    for p in 0..s.pairs {
        let i = s.scalars + 2 * p;
        let (a, b) = (w[i], w[i + 1]);
        let (h1, h2, t1, t2) = (h[i], h[i + 1], t[i], t[i + 1]);
        gw[i] += scale * (h1 * t1 + h2 * t2);
        gw[i + 1] += scale * (h2 * t1 - h1 * t2);
        gh[i] += scale * (a * t1 - b * t2);
        gh[i + 1] += scale * (a * t2 + b * t1);
        gt[i] += scale * (a * h1 + b * h2);
        gt[i + 1] += scale * (a * h2 - b * h1);
    }
}

pub fn dense<T: Scalar>(s: BlockStructure, w: &[T]) -> Vec<Vec<T>> {
    let d = s.dim();
    let mut m = vec![vec![T::zero(); d]; d];
    for i in 0..s.scalars {
        m[i][i] = w[i];
    }
    for p in 0..s.pairs {
        let i = s.scalars + 2 * p;
        let (a, b) = (w[i], w[i + 1]);
        m[i][i] = a;
        m[i][i + 1] = -b;
        m[i + 1][i] = b;
        m[i + 1][i + 1] = a;
    }
    m
}

fn matmul<T: Scalar>(x: &[Vec<T>], y: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = x.len();
    let mut out = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            let xik = x[i][k];
            if xik == T::zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += xik * y[k][j];
            }
        }
    }
    out
}

fn transpose<T: Scalar>(x: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| x[j][i]).collect()).collect()
}

fn frobenius_diff<T: Scalar>(x: &[Vec<T>], y: &[Vec<T>]) -> f64 {
    x.iter()
        .zip(y)
        .flat_map(|(rx, ry)| rx.iter().zip(ry).map(|(a, b)| (*a - *b).f64().powi(2)))
        .sum::<f64>()
        .sqrt()
}

/// `||W W^T - W^T W||_F`, computed on the dense matrix.
pub fn normality_residual<T: Scalar>(m: &BlockDiagonalMap<T>) -> f64 {
    let w = m.to_dense();
    let wt = transpose(&w);
    frobenius_diff(&matmul(&w, &wt), &matmul(&wt, &w))
}

/// `||W W' - W' W||_F`, computed on the dense matrices.
pub fn commutator_residual<T: Scalar>(x: &BlockDiagonalMap<T>, y: &BlockDiagonalMap<T>) -> f64 {
    let (a, b) = (x.to_dense(), y.to_dense());
    frobenius_diff(&matmul(&a, &b), &matmul(&b, &a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_map(s: BlockStructure, rng: &mut ChaCha8Rng) -> BlockDiagonalMap<f64> {
        BlockDiagonalMap::from_params(s, (0..s.dim()).map(|_| rng.random_range(-2.0..2.0)).collect())
    }

    #[test]
    fn dense_oracle_agrees() {
        let s = BlockStructure::new(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_map(s, &mut rng);
            let h: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let t: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let w = m.to_dense();
            let mut oracle = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    oracle += h[i] * w[i][j] * t[j];
                }
            }
            assert!((bilinear(s, &m.params, &h, &t) - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn maps_are_normal_and_commute() {
        let s = BlockStructure::half_pairs(10);
        assert_eq!(s, BlockStructure::new(6, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_map(s, &mut rng);
        let y = random_map(s, &mut rng);
        assert!(normality_residual(&x) < 1e-9);
        assert!(commutator_residual(&x, &y) < 1e-9);
        assert_eq!(commutator_residual(&x, &BlockDiagonalMap::identity(s)), 0.0);
    }

    #[test]
    fn identity_unit_basis_scores_one() {
        let s = BlockStructure::new(2, 1);
        let w = BlockDiagonalMap::<f64>::identity(s);
        let e = [0.0, 0.0, 1.0, 0.0];
        assert_eq!(bilinear(s, &w.params, &e, &e), 1.0);
    }
}

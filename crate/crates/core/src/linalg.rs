//! Row reduction over an exact field.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::tensor::{basis_vec, zero_vec};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    if !s.is_zero() {
                        *d = &*d - &(&factor * s);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vec<Scalar>]) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows).len()
}

/// Inverse of a square matrix given as rows.
pub fn inverse(field: Field, rows: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(basis_vec(field, n, i));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Extends linearly independent `seeds` to a basis of `field^n` by a greedy
/// scan of the standard basis vectors `e_0, e_1, …`. Seeds come first.
pub fn complete_basis(field: Field, n: usize, seeds: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let mut basis = seeds.to_vec();
    if rank(&basis) != basis.len() {
        return Err(Error::Singular);
    }
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut trial = basis.clone();
        trial.push(basis_vec(field, n, i));
        if rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    Ok(basis)
}

/// Coordinates with respect to an adapted basis whose first vector is a
/// fixed element (the unit of an algebra or pointed space).
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// Basis vectors (first one is the seed).
    pub basis: Vec<Vec<Scalar>>,
    /// Rows of the inverse change-of-basis matrix: `coords = inv · x`.
    inv: Vec<Vec<Scalar>>,
    field: Field,
}

impl AdaptedBasis {
    pub fn new(field: Field, seed: &[Scalar]) -> Result<Self> {
        let n = seed.len();
        let basis = complete_basis(field, n, &[seed.to_vec()])?;
        // columns of the change-of-basis matrix are the basis vectors
        let mat: Vec<Vec<Scalar>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        let inv = inverse(field, &mat)?;
        Ok(AdaptedBasis { basis, inv, field })
    }

    pub fn coordinates(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.field, x.len());
        for (o, row) in out.iter_mut().zip(&self.inv) {
            for (r, xi) in row.iter().zip(x) {
                if !r.is_zero() && !xi.is_zero() {
                    *o += &(r * xi);
                }
            }
        }
        out
    }
}

/// Solution set `{ x : A x = b }` of an affine system given as augmented rows
/// `[A | b]`: a particular solution plus a nullspace basis. `None` when
/// inconsistent.
pub fn affine_solutions(
    field: Field,
    nvars: usize,
    mut augmented: Vec<Vec<Scalar>>,
) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    if augmented.is_empty() {
        let null = (0..nvars).map(|i| basis_vec(field, nvars, i)).collect();
        return Some((zero_vec(field, nvars), null));
    }
    let pivots = rref(&mut augmented);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut particular = zero_vec(field, nvars);
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = augmented[r][nvars].clone();
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let null = free
        .iter()
        .map(|&f| {
            let mut v = basis_vec(field, nvars, f);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&augmented[r][f];
            }
            v
        })
        .collect();
    Some((particular, null))
}

//! Dense linear maps between tensor products of finite-dimensional spaces.
//!
//! Basis vectors of `V_1 ⊗ … ⊗ V_n` are indexed by multi-indices flattened
//! row-major: the leftmost factor is the most significant digit. Every map,
//! Kronecker product and flip in the crate follows this single convention.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{shape_mismatch, Error, Result};
use crate::scalar::{Field, Scalar};

/// Ordered list of factor dimensions of a tensor product space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorShape(Vec<usize>);

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::EmptyShape);
        }
        Ok(TensorShape(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &TensorShape) -> TensorShape {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        TensorShape(dims)
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.0.len() {
            return Err(shape_mismatch("flat_index", self.0.len(), multi.len()));
        }
        let mut flat = 0;
        for (&i, &d) in multi.iter().zip(&self.0) {
            if i >= d {
                return Err(Error::IndexOutOfRange { index: i, dim: d });
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn unflatten(&self, mut flat: usize) -> Result<Vec<usize>> {
        let total = self.total();
        if flat >= total {
            return Err(Error::IndexOutOfRange { index: flat, dim: total });
        }
        let mut multi = vec![0; self.0.len()];
        for (slot, &d) in multi.iter_mut().zip(&self.0).rev() {
            *slot = flat % d;
            flat /= d;
        }
        Ok(multi)
    }

    /// All multi-indices in lexicographic (flat) order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.total()).map(move |i| self.unflatten(i).expect("in range"))
    }
}

/// One tensor factor of an elementary tensor: a basis vector or a dense vector.
#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    Basis(usize),
    Dense(&'a [Scalar]),
}

/// `out += coef · (f_1 ⊗ … ⊗ f_n)` with `f_k` living in a space of dimension
/// `dims[k]`.
pub fn add_outer(out: &mut [Scalar], dims: &[usize], coef: &Scalar, factors: &[Factor<'_>]) {
    debug_assert_eq!(dims.len(), factors.len());
    fn go(out: &mut [Scalar], dims: &[usize], factors: &[Factor<'_>], k: usize, offset: usize, coef: &Scalar) {
        if k == factors.len() {
            out[offset] += coef;
            return;
        }
        match factors[k] {
            Factor::Basis(i) => go(out, dims, factors, k + 1, offset * dims[k] + i, coef),
            Factor::Dense(v) => {
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        go(out, dims, factors, k + 1, offset * dims[k] + i, &(coef * x));
                    }
                }
            }
        }
    }
    if !coef.is_zero() {
        go(out, dims, factors, 0, 0, coef);
    }
}

pub fn zero_vec(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn basis_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

/// Kronecker product of two coordinate vectors.
pub fn kron(field: Field, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = zero_vec(field, x.len() * y.len());
    add_outer(&mut out, &[x.len(), y.len()], &field.one(), &[Factor::Dense(x), Factor::Dense(y)]);
    out
}

/// `y += c · x`
pub fn axpy(y: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(c * xi);
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Linear map `domain → codomain`; stored column by column so that the
/// image of a basis vector is a contiguous slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorMap {
    field: Field,
    domain: TensorShape,
    codomain: TensorShape,
    cols: Vec<Scalar>,
}

impl TensorMap {
    pub fn zero(field: Field, domain: TensorShape, codomain: TensorShape) -> Self {
        let n = domain.total() * codomain.total();
        TensorMap { field, domain, codomain, cols: vec![field.zero(); n] }
    }

    pub fn identity(field: Field, shape: TensorShape) -> Self {
        let n = shape.total();
        let mut m = TensorMap::zero(field, shape.clone(), shape);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a map from the images of the domain basis vectors.
    pub fn from_columns(
        field: Field,
        domain: TensorShape,
        codomain: TensorShape,
        columns: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if columns.len() != domain.total() {
            return Err(shape_mismatch("from_columns", domain.total(), columns.len()));
        }
        let rows = codomain.total();
        let mut cols = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(shape_mismatch("from_columns", rows, c.len()));
            }
            check_field(field, &c)?;
            cols.extend(c);
        }
        Ok(TensorMap { field, domain, codomain, cols })
    }

    /// Builds a map from a row-major matrix (`codomain.total()` rows).
    pub fn from_rows(field: Field, domain: TensorShape, codomain: TensorShape, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if rows.len() != codomain.total() {
            return Err(shape_mismatch("from_rows", codomain.total(), rows.len()));
        }
        let n = domain.total();
        for r in &rows {
            if r.len() != n {
                return Err(shape_mismatch("from_rows", n, r.len()));
            }
            check_field(field, r)?;
        }
        let mut m = TensorMap::zero(field, domain, codomain);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, x) in r.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Builds a map from a function computing the image of each basis
    /// multi-index.
    pub fn from_basis_images(
        field: Field,
        domain: TensorShape,
        codomain: TensorShape,
        mut image: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> Result<Self> {
        let columns = domain.indices().map(|ix| image(&ix)).collect();
        TensorMap::from_columns(field, domain, codomain, columns)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn domain(&self) -> &TensorShape {
        &self.domain
    }

    pub fn codomain(&self) -> &TensorShape {
        &self.codomain
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.cols[col * self.codomain.total() + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        let rows = self.codomain.total();
        self.cols[col * rows + row] = value;
    }

    /// Image of the `col`-th domain basis vector.
    pub fn column(&self, col: usize) -> &[Scalar] {
        let rows = self.codomain.total();
        &self.cols[col * rows..(col + 1) * rows]
    }

    /// Image of the basis vector with the given domain multi-index.
    pub fn image_of(&self, multi: &[usize]) -> &[Scalar] {
        self.column(self.domain.flat_index(multi).expect("index in range"))
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.codomain.total())
            .map(|i| (0..self.domain.total()).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> impl Iterator<Item = &Scalar> + '_ {
        let (r, c) = (self.codomain.total(), self.domain.total());
        (0..r).flat_map(move |i| (0..c).map(move |j| self.entry(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.cols)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.domain.total() {
            return Err(shape_mismatch("apply", self.domain.total(), v.len()));
        }
        let mut out = zero_vec(self.field, self.codomain.total());
        for (j, x) in v.iter().enumerate() {
            axpy(&mut out, x, self.column(j));
        }
        Ok(out)
    }

    /// Relabels domain and codomain shapes with equal totals; the matrix is
    /// unchanged.
    pub fn reshape(&self, domain: TensorShape, codomain: TensorShape) -> Result<Self> {
        if domain.total() != self.domain.total() || codomain.total() != self.codomain.total() {
            return Err(shape_mismatch(
                "reshape",
                (self.domain.total(), self.codomain.total()),
                (domain.total(), codomain.total()),
            ));
        }
        Ok(TensorMap { domain, codomain, ..self.clone() })
    }

    /// Image of basis pair `(i, j)` for a map with a two-factor domain.
    pub fn column2(&self, i: usize, j: usize) -> &[Scalar] {
        self.column(i * self.domain.dims()[1] + j)
    }

    /// Nonzero terms of the image of basis pair `(i, j)` under a map whose
    /// codomain has two factors: `(coef, out0, out1)`.
    pub fn terms2(&self, i: usize, j: usize) -> impl Iterator<Item = (&Scalar, usize, usize)> + '_ {
        let d = self.domain.dims();
        let c1 = self.codomain.dims()[1];
        let col = self.column(i * d[1] + j);
        col.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(r, x)| (x, r / c1, r % c1))
    }

    /// Same as [`terms2`](Self::terms2) for a three-factor codomain.
    pub fn terms3(&self, i: usize, j: usize) -> impl Iterator<Item = (&Scalar, usize, usize, usize)> + '_ {
        let d = self.domain.dims();
        let cd = self.codomain.dims();
        let (c1, c2) = (cd[1], cd[2]);
        let col = self.column(i * d[1] + j);
        col.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(r, x)| (x, r / (c1 * c2), (r / c2) % c1, r % c2))
    }
}

fn check_field(field: Field, v: &[Scalar]) -> Result<()> {
    if v.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `g ∘ f`
pub fn compose(g: &TensorMap, f: &TensorMap) -> Result<TensorMap> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.codomain.total() != g.domain.total() {
        return Err(shape_mismatch("compose", g.domain.total(), f.codomain.total()));
    }
    let mut out = TensorMap::zero(f.field, f.domain.clone(), g.codomain.clone());
    let rows = g.codomain.total();
    for j in 0..f.domain.total() {
        let dst = &mut out.cols[j * rows..(j + 1) * rows];
        for (k, x) in f.column(j).iter().enumerate() {
            axpy(dst, x, g.column(k));
        }
    }
    Ok(out)
}

/// Kronecker product `f ⊗ g`; shapes concatenate.
pub fn tensor(f: &TensorMap, g: &TensorMap) -> Result<TensorMap> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    let domain = f.domain.concat(&g.domain);
    let codomain = f.codomain.concat(&g.codomain);
    let (fd, gd) = (f.domain.total(), g.domain.total());
    let columns = (0..fd * gd).map(|j| kron(f.field, f.column(j / gd), g.column(j % gd))).collect();
    TensorMap::from_columns(f.field, domain, codomain, columns)
}

/// Tensor product of several maps, left to right.
pub fn tensor_all(maps: &[&TensorMap]) -> Result<TensorMap> {
    let (first, rest) = maps.split_first().ok_or(Error::EmptyShape)?;
    rest.iter().try_fold((*first).clone(), |acc, m| tensor(&acc, m))
}

/// The flip `V_1 ⊗ V_2 → V_2 ⊗ V_1`, `e_i ⊗ e_j ↦ e_j ⊗ e_i`.
pub fn flip(field: Field, d1: usize, d2: usize) -> Result<TensorMap> {
    permutation(field, &[d1, d2], &[1, 0])
}

/// Reorders tensor factors: factor `k` of the domain lands in position
/// `perm[k]` of the codomain.
pub fn permutation(field: Field, dims: &[usize], perm: &[usize]) -> Result<TensorMap> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || core::mem::replace(&mut seen[p], true)) {
        return Err(shape_mismatch("permutation", dims.len(), perm));
    }
    let domain = TensorShape::new(dims.to_vec())?;
    let mut cod = vec![0; dims.len()];
    for (k, &p) in perm.iter().enumerate() {
        cod[p] = dims[k];
    }
    let codomain = TensorShape::new(cod)?;
    let mut m = TensorMap::zero(field, domain.clone(), codomain.clone());
    let mut target = vec![0; dims.len()];
    for (j, ix) in domain.indices().enumerate() {
        for (k, &p) in perm.iter().enumerate() {
            target[p] = ix[k];
        }
        let i = codomain.flat_index(&target)?;
        m.set(i, j, field.one());
    }
    Ok(m)
}

/// Identity map on a shape given by its dims.
pub fn id(field: Field, dims: &[usize]) -> TensorMap {
    TensorMap::identity(field, TensorShape::new(dims.to_vec()).expect("nonempty dims"))
}

/// Transpose (used as the inverse of permutation maps).
pub fn transpose(m: &TensorMap) -> TensorMap {
    let mut t = TensorMap::zero(m.field, m.codomain.clone(), m.domain.clone());
    for i in 0..m.codomain.total() {
        for j in 0..m.domain.total() {
            t.set(j, i, m.entry(i, j).clone());
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(d: &[usize]) -> TensorShape {
        TensorShape::new(d.to_vec()).unwrap()
    }

    fn q(n: i64) -> Scalar {
        Field::Rationals.from_i64(n)
    }

    #[test]
    fn flat_index_examples() {
        assert_eq!(shape(&[2, 3]).flat_index(&[1, 2]).unwrap(), 5);
        assert_eq!(shape(&[2, 3]).flat_index(&[0, 0]).unwrap(), 0);
        assert_eq!(shape(&[2, 2, 2]).flat_index(&[1, 0, 1]).unwrap(), 5);
        assert!(shape(&[2, 3]).flat_index(&[2, 0]).is_err());
        assert!(shape(&[2, 3]).flat_index(&[0]).is_err());
    }

    #[test]
    fn empty_shapes_rejected() {
        assert_eq!(TensorShape::new(vec![]), Err(Error::EmptyShape));
        assert_eq!(TensorShape::new(vec![2, 0]), Err(Error::EmptyShape));
    }

    #[test]
    fn flat_unflatten_exhaustive() {
        let shapes: [&[usize]; 6] = [&[1], &[7], &[2, 3], &[4, 1, 5], &[3, 3, 3, 3], &[10, 10, 10, 10]];
        for d in shapes {
            let s = shape(d);
            for flat in 0..s.total() {
                let multi = s.unflatten(flat).unwrap();
                assert_eq!(s.flat_index(&multi).unwrap(), flat);
            }
            assert!(s.unflatten(s.total()).is_err());
        }
    }

    #[test]
    fn flip_examples() {
        let f = Field::Rationals;
        let fl = flip(f, 2, 2).unwrap();
        // e_(0,1) -> e_(1,0)
        assert_eq!(fl.column(1), basis_vec(f, 4, 2).as_slice());
        let v = [q(1), q(2), q(3), q(4)];
        assert_eq!(fl.apply(&v).unwrap(), [q(1), q(3), q(2), q(4)]);
        let round = compose(&flip(f, 2, 3).unwrap(), &flip(f, 3, 2).unwrap()).unwrap();
        assert_eq!(round.column(0).len(), 6);
        assert_eq!(round.reshape(shape(&[6]), shape(&[6])).unwrap(), id(f, &[6]));
        let trivial = flip(f, 1, 3).unwrap();
        assert_eq!(trivial.reshape(shape(&[3]), shape(&[3])).unwrap(), id(f, &[3]));
    }

    #[test]
    fn tensor_examples() {
        let f = Field::Rationals;
        let t = tensor(&id(f, &[2]), &id(f, &[3])).unwrap();
        assert_eq!(t, id(f, &[2, 3]));
        let m = tensor(&flip(f, 2, 2).unwrap(), &id(f, &[2])).unwrap();
        let src = shape(&[2, 2, 2]).flat_index(&[1, 0, 1]).unwrap();
        let dst = shape(&[2, 2, 2]).flat_index(&[0, 1, 1]).unwrap();
        assert_eq!(m.column(src), basis_vec(f, 8, dst).as_slice());
    }

    #[test]
    fn tensor_matches_entrywise_oracle() {
        let f = Field::Rationals;
        let a = TensorMap::from_rows(
            f,
            shape(&[2]),
            shape(&[3]),
            vec![vec![q(1), q(2)], vec![q(0), q(-1)], vec![q(5), q(3)]],
        )
        .unwrap();
        let b = TensorMap::from_rows(f, shape(&[2]), shape(&[2]), vec![vec![q(7), q(0)], vec![q(-2), q(4)]]).unwrap();
        let t = tensor(&a, &b).unwrap();
        for i1 in 0..3 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        let expected = a.entry(i1, j1) * b.entry(i2, j2);
                        assert_eq!(t.entry(i1 * 2 + i2, j1 * 2 + j2), &expected);
                    }
                }
            }
        }
    }

    #[test]
    fn compose_and_apply() {
        let f = Field::Rationals;
        let m = TensorMap::from_rows(f, shape(&[2]), shape(&[2]), vec![vec![q(1), q(2)], vec![q(3), q(4)]]).unwrap();
        assert_eq!(compose(&id(f, &[2]), &m).unwrap(), m);
        assert_eq!(compose(&m, &id(f, &[2])).unwrap(), m);
        let z = TensorMap::zero(f, shape(&[2]), shape(&[2]));
        assert!(is_zero_vec(&z.apply(&[q(3), q(9)]).unwrap()));
        assert_eq!(m.apply(&[q(1), q(1)]).unwrap(), [q(3), q(7)]);
        assert!(m.apply(&[q(1)]).is_err());
        assert!(compose(&m, &id(f, &[3])).is_err());
    }

    #[test]
    fn permutation_cycles() {
        let f = Field::prime(5).unwrap();
        let p = permutation(f, &[2, 3, 4], &[1, 2, 0]).unwrap();
        assert_eq!(p.codomain().dims(), &[4, 2, 3]);
        let back = transpose(&p);
        assert_eq!(compose(&back, &p).unwrap(), id(f, &[2, 3, 4]));
        assert!(permutation(f, &[2, 3], &[0, 0]).is_err());
    }
}

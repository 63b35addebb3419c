//! Unital associative algebras given by structure constants, pointed spaces
//! and coalgebras with a group-like element.

use alloc::vec::Vec;

use crate::error::{shape_mismatch, Error, Result};
use crate::linalg;
use crate::report::{first_failure, first_of, tuples, Report, Witness};
use crate::scalar::{Field, Scalar};
use crate::tensor::{self, add_outer, axpy, basis_vec, compose, kron, zero_vec, Factor, TensorMap, TensorShape};

/// A finite-dimensional unital associative algebra. The multiplication is a
/// map `[n, n] → [n]`; column `i * n + j` holds `e_i · e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    field: Field,
    dim: usize,
    mul: TensorMap,
    unit: Vec<Scalar>,
}

impl FinAlgebra {
    /// Validates associativity and the unit laws on all basis tuples.
    pub fn new(field: Field, dim: usize, mul: TensorMap, unit: Vec<Scalar>) -> Result<Self> {
        FinAlgebra::unchecked(field, dim, mul, unit)?.validate()
    }

    /// Runs the unit and associativity checks on an unchecked algebra.
    pub fn validate(self) -> Result<Self> {
        if let Some(w) = self.unit_failure() {
            return Err(Error::NotUnital(w));
        }
        if let Some(w) = self.associativity_failure() {
            return Err(Error::NotAssociative(w));
        }
        Ok(self)
    }

    /// Shape checks only; callers must validate with
    /// [`associativity_failure`](Self::associativity_failure) and
    /// [`unit_failure`](Self::unit_failure).
    pub fn unchecked(field: Field, dim: usize, mul: TensorMap, unit: Vec<Scalar>) -> Result<Self> {
        if mul.field() != field || unit.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if dim == 0 {
            return Err(Error::EmptyShape);
        }
        if mul.domain().total() != dim * dim || mul.codomain().total() != dim {
            return Err(shape_mismatch(
                "algebra multiplication",
                (dim * dim, dim),
                (mul.domain().total(), mul.codomain().total()),
            ));
        }
        if unit.len() != dim {
            return Err(shape_mismatch("algebra unit", dim, unit.len()));
        }
        let mul = mul.reshape(TensorShape::new(alloc::vec![dim, dim])?, TensorShape::new(alloc::vec![dim])?)?;
        Ok(FinAlgebra { field, dim, mul, unit })
    }

    /// From a table `c[i][j][k]` meaning `e_i e_j = Σ_k c[i][j][k] e_k`.
    pub fn from_table(field: Field, table: Vec<Vec<Vec<Scalar>>>, unit: Vec<Scalar>) -> Result<Self> {
        let n = table.len();
        let mut columns = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(shape_mismatch("structure constants", n, row.len()));
            }
            columns.extend(row);
        }
        let mul = TensorMap::from_columns(
            field,
            TensorShape::new(alloc::vec![n, n])?,
            TensorShape::new(alloc::vec![n])?,
            columns,
        )?;
        FinAlgebra::new(field, n, mul, unit)
    }

    /// The ground field as a 1-dimensional algebra.
    pub fn ground(field: Field) -> Self {
        FinAlgebra::from_table(field, alloc::vec![alloc::vec![alloc::vec![field.one()]]], alloc::vec![field.one()])
            .expect("k is an algebra")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul_map(&self) -> &TensorMap {
        &self.mul
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// `c[i][j][k]`
    pub fn table(&self) -> Vec<Vec<Vec<Scalar>>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.mul_basis(i, j).to_vec()).collect()).collect()
    }

    /// `e_i · e_j`
    pub fn mul_basis(&self, i: usize, j: usize) -> &[Scalar] {
        self.mul.column(i * self.dim + j)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(shape_mismatch("algebra_mul", self.dim, (x.len(), y.len())));
        }
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    axpy(&mut out, &(xi * yj), self.mul_basis(i, j));
                }
            }
        }
        out
    }

    /// `x · e_j`
    pub(crate) fn mul_vec_basis(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = zero_vec(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            axpy(&mut out, xi, self.mul_basis(i, j));
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        basis_vec(self.field, self.dim, i)
    }

    pub fn identity_map(&self) -> TensorMap {
        tensor::id(self.field, &[self.dim])
    }

    /// Smallest basis triple `(i, j, k)` with `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub fn associativity_failure(&self) -> Option<Witness> {
        let n = self.dim;
        first_failure("(e_i e_j) e_k = e_i (e_j e_k)", tuples(&[n, n, n]), |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            let left = self.mul_vec_basis(self.mul_basis(i, j), k);
            let mut right = zero_vec(self.field, n);
            for (l, x) in self.mul_basis(j, k).iter().enumerate() {
                axpy(&mut right, x, self.mul_basis(i, l));
            }
            (left, right)
        })
    }

    /// Smallest basis index where `1·e_i = e_i` or `e_i·1 = e_i` fails.
    pub fn unit_failure(&self) -> Option<Witness> {
        let n = self.dim;
        first_of([
            first_failure("1 · e_i = e_i", tuples(&[n]), |ix| {
                let e = self.basis(ix[0]);
                (self.mul_unchecked(&self.unit, &e), e)
            }),
            first_failure("e_i · 1 = e_i", tuples(&[n]), |ix| {
                let e = self.basis(ix[0]);
                (self.mul_unchecked(&e, &self.unit), e)
            }),
        ])
    }

    pub fn as_pointed(&self) -> PointedSpace {
        PointedSpace { field: self.field, dim: self.dim, unit: self.unit.clone() }
    }

    /// Transports the algebra structure along a linear isomorphism
    /// `iso: self → target space`.
    pub fn transport(&self, iso: &TensorMap) -> Result<FinAlgebra> {
        let n = self.dim;
        if iso.domain().total() != n || iso.codomain().total() != n {
            return Err(shape_mismatch("transport", n, (iso.domain().total(), iso.codomain().total())));
        }
        let inv_rows = linalg::inverse(self.field, &iso.to_rows())?;
        let shape = TensorShape::new(alloc::vec![n])?;
        let inv = TensorMap::from_rows(self.field, shape.clone(), shape, inv_rows)?;
        let mul = compose(iso, &compose(&self.mul, &tensor::tensor(&inv, &inv)?)?)?;
        let unit = iso.apply(&self.unit)?;
        FinAlgebra::new(self.field, n, mul, unit)
    }
}

/// Unchecked algebra on a tensor product space `dims` whose product of basis
/// elements is accumulated by `product(left, right, out)` from their
/// multi-indices.
pub(crate) fn algebra_from_products(
    field: Field,
    dims: &[usize],
    unit: Vec<Scalar>,
    mut product: impl FnMut(&[usize], &[usize], &mut [Scalar]),
) -> Result<FinAlgebra> {
    let shape = TensorShape::new(dims.to_vec())?;
    let n = shape.total();
    let mut columns = Vec::with_capacity(n * n);
    let basis: Vec<Vec<usize>> = shape.indices().collect();
    for left in &basis {
        for right in &basis {
            let mut out = zero_vec(field, n);
            product(left, right, &mut out);
            columns.push(out);
        }
    }
    let mul = TensorMap::from_columns(
        field,
        TensorShape::new(alloc::vec![n, n])?,
        TensorShape::new(alloc::vec![n])?,
        columns,
    )?;
    FinAlgebra::unchecked(field, n, mul, unit)
}

/// `A ⊗ B` with componentwise multiplication and unit `1_A ⊗ 1_B`.
pub fn ordinary_tensor(a: &FinAlgebra, b: &FinAlgebra) -> Result<FinAlgebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let (n, m) = (a.dim, b.dim);
    let f = a.field;
    let dims = [n, m];
    let shape = TensorShape::new(alloc::vec![n * m, n * m])?;
    let mul = TensorMap::from_basis_images(f, shape, TensorShape::new(alloc::vec![n * m])?, |ix| {
        let (x, y) = (ix[0], ix[1]);
        let mut out = zero_vec(f, n * m);
        add_outer(
            &mut out,
            &dims,
            &f.one(),
            &[Factor::Dense(a.mul_basis(x / m, y / m)), Factor::Dense(b.mul_basis(x % m, y % m))],
        );
        out
    })?;
    FinAlgebra::new(f, n * m, mul, kron(f, &a.unit, &b.unit))
}

/// Checks that `f: A → X` preserves the unit and products of basis pairs.
pub fn is_algebra_map(f: &TensorMap, a: &FinAlgebra, x: &FinAlgebra) -> Result<Report> {
    if f.domain().total() != a.dim || f.codomain().total() != x.dim {
        return Err(shape_mismatch("is_algebra_map", (a.dim, x.dim), (f.domain().total(), f.codomain().total())));
    }
    if f.field() != a.field || a.field != x.field {
        return Err(Error::FieldMismatch);
    }
    let mut report = Report::default();
    report.push(
        "unit-preserved",
        first_failure("f(1_A) = 1_X", tuples(&[1]), |_| (f.apply(&a.unit).expect("shape checked"), x.unit.clone())),
    );
    let n = a.dim;
    report.push(
        "multiplicative",
        first_failure("f(e_i e_j) = f(e_i) f(e_j)", tuples(&[n, n]), |ix| {
            let lhs = f.apply(a.mul_basis(ix[0], ix[1])).expect("shape checked");
            let rhs = x.mul_unchecked(f.column(ix[0]), f.column(ix[1]));
            (lhs, rhs)
        }),
    );
    Ok(report)
}

/// A vector space with a distinguished nonzero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedSpace {
    field: Field,
    dim: usize,
    unit: Vec<Scalar>,
}

impl PointedSpace {
    pub fn new(field: Field, unit: Vec<Scalar>) -> Result<Self> {
        if unit.is_empty() {
            return Err(Error::EmptyShape);
        }
        if unit.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if tensor::is_zero_vec(&unit) {
            return Err(Error::ZeroUnit);
        }
        Ok(PointedSpace { field, dim: unit.len(), unit })
    }

    /// `field^dim` pointed by the first basis vector.
    pub fn standard(field: Field, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyShape);
        }
        PointedSpace::new(field, basis_vec(field, dim, 0))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// `V ⊗ W` pointed by `1_V ⊗ 1_W`.
    pub fn tensor(&self, other: &PointedSpace) -> Result<PointedSpace> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        PointedSpace::new(self.field, kron(self.field, &self.unit, &other.unit))
    }
}

/// Coassociative counital coalgebra with a group-like distinguished element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    field: Field,
    dim: usize,
    comul: TensorMap,
    counit: TensorMap,
    unit: Vec<Scalar>,
}

impl Coalgebra {
    pub fn new(field: Field, dim: usize, comul: TensorMap, counit: TensorMap, unit: Vec<Scalar>) -> Result<Self> {
        if comul.field() != field || counit.field() != field || unit.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if dim == 0 {
            return Err(Error::EmptyShape);
        }
        if comul.domain().total() != dim || comul.codomain().total() != dim * dim {
            return Err(shape_mismatch(
                "comultiplication",
                (dim, dim * dim),
                (comul.domain().total(), comul.codomain().total()),
            ));
        }
        if counit.domain().total() != dim || counit.codomain().total() != 1 {
            return Err(shape_mismatch("counit", (dim, 1), (counit.domain().total(), counit.codomain().total())));
        }
        if unit.len() != dim {
            return Err(shape_mismatch("coalgebra unit", dim, unit.len()));
        }
        let d = TensorShape::new(alloc::vec![dim])?;
        let comul = comul.reshape(d.clone(), TensorShape::new(alloc::vec![dim, dim])?)?;
        let counit = counit.reshape(d, TensorShape::new(alloc::vec![1])?)?;
        let h = Coalgebra { field, dim, comul, counit, unit };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        let f = self.field;
        let n = self.dim;
        let grouplike = first_of([
            first_failure("Δ(1_H) = 1_H ⊗ 1_H", tuples(&[1]), |_| {
                (self.comul.apply(&self.unit).expect("shape"), kron(f, &self.unit, &self.unit))
            }),
            first_failure("ε(1_H) = 1", tuples(&[1]), |_| {
                (self.counit.apply(&self.unit).expect("shape"), alloc::vec![f.one()])
            }),
        ]);
        if let Some(w) = grouplike {
            return Err(Error::UnitNotGrouplike(w));
        }
        let id = tensor::id(f, &[n]);
        let left = compose(&tensor::tensor(&self.comul, &id)?, &self.comul)?;
        let right = compose(&tensor::tensor(&id, &self.comul)?, &self.comul)?;
        if let Some(w) = first_failure("(Δ ⊗ id)Δ = (id ⊗ Δ)Δ", tuples(&[n]), |ix| {
            (left.column(ix[0]).to_vec(), right.column(ix[0]).to_vec())
        }) {
            return Err(Error::NotCoassociative(w));
        }
        let eps_l = compose(&tensor::tensor(&self.counit, &id)?, &self.comul)?;
        let eps_r = compose(&tensor::tensor(&id, &self.counit)?, &self.comul)?;
        let counit_fail = first_of([
            first_failure("(ε ⊗ id)Δ = id", tuples(&[n]), |ix| {
                (eps_l.column(ix[0]).to_vec(), basis_vec(f, n, ix[0]))
            }),
            first_failure("(id ⊗ ε)Δ = id", tuples(&[n]), |ix| {
                (eps_r.column(ix[0]).to_vec(), basis_vec(f, n, ix[0]))
            }),
        ]);
        if let Some(w) = counit_fail {
            return Err(Error::CounitFail(w));
        }
        Ok(())
    }

    /// Group algebra coalgebra on `n` group-like basis elements, `1_H = g_0`.
    pub fn grouplike(field: Field, n: usize) -> Result<Self> {
        let d = TensorShape::new(alloc::vec![n])?;
        let comul = TensorMap::from_basis_images(field, d.clone(), TensorShape::new(alloc::vec![n, n])?, |ix| {
            basis_vec(field, n * n, ix[0] * n + ix[0])
        })?;
        let counit =
            TensorMap::from_basis_images(field, d, TensorShape::new(alloc::vec![1])?, |_| alloc::vec![field.one()])?;
        Coalgebra::new(field, n, comul, counit, basis_vec(field, n, 0))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn comul(&self) -> &TensorMap {
        &self.comul
    }

    pub fn counit(&self) -> &TensorMap {
        &self.counit
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn as_pointed(&self) -> PointedSpace {
        PointedSpace { field: self.field, dim: self.dim, unit: self.unit.clone() }
    }
}

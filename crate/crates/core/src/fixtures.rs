//! Small algebras and two-sided data used throughout the tests, the CLI
//! examples and the README.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Coalgebra, FinAlgebra, PointedSpace};
use crate::constructions::{trivial_e, MaData};
use crate::error::Result;
use crate::scalar::{Field, Scalar};
use crate::search::{search_fp, SearchSpec};
use crate::tensor::{basis_vec, flip, TensorMap, TensorShape};
use crate::twosided::{transport_data, TwoSidedData};

fn shape(dims: &[usize]) -> TensorShape {
    TensorShape::new(dims.to_vec()).expect("nonempty dims")
}

fn table(f: Field, n: usize, rule: impl Fn(usize, usize) -> Vec<(usize, i64)>) -> Vec<Vec<Vec<Scalar>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![f.zero(); n];
                    for (k, c) in rule(i, j) {
                        v[k] += &f.from_i64(c);
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Dual numbers `k[x]/(x²)` on the basis `{1, x}`.
pub fn dual(f: Field) -> FinAlgebra {
    let t = table(f, 2, |i, j| if i + j < 2 { vec![(i + j, 1)] } else { vec![] });
    FinAlgebra::from_table(f, t, basis_vec(f, 2, 0)).expect("dual numbers")
}

/// `k[t]/(t² − d)` on the basis `{1, t}`.
pub fn quadratic(f: Field, d: i64) -> FinAlgebra {
    let t = table(f, 2, |i, j| if i + j < 2 { vec![(i + j, 1)] } else { vec![(0, d)] });
    FinAlgebra::from_table(f, t, basis_vec(f, 2, 0)).expect("quadratic algebra")
}

/// Upper triangular 2×2 matrices on `{e11, e12, e22}`; the unit
/// `e11 + e22` is not a basis vector.
pub fn upper_triangular(f: Field) -> FinAlgebra {
    let t = table(f, 3, |i, j| match (i, j) {
        (0, 0) => vec![(0, 1)],
        (0, 1) => vec![(1, 1)],
        (1, 2) => vec![(1, 1)],
        (2, 2) => vec![(2, 1)],
        _ => vec![],
    });
    let unit = vec![f.one(), f.zero(), f.one()];
    FinAlgebra::from_table(f, t, unit).expect("upper triangular matrices")
}

/// `e_y ⊗ e_x ↦ q^(y·x) e_x ⊗ e_y` on `Y ⊗ X → X ⊗ Y`, reading basis index
/// as degree. With `q = −1` and two-dimensional factors this is the graded
/// flip of super vector spaces.
pub fn twist(f: Field, dy: usize, dx: usize, q: &Scalar) -> TensorMap {
    TensorMap::from_basis_images(f, shape(&[dy, dx]), shape(&[dx, dy]), |ix| {
        let mut c = f.one();
        for _ in 0..ix[0] * ix[1] {
            c = &c * q;
        }
        let mut v = basis_vec(f, dx * dy, ix[1] * dy + ix[0]);
        v[ix[1] * dy + ix[0]] = c;
        v
    })
    .expect("shapes")
}

pub fn graded_flip(f: Field, dy: usize, dx: usize) -> TensorMap {
    twist(f, dy, dx, &f.from_i64(-1))
}

pub fn flip_map(f: Field, dy: usize, dx: usize) -> TensorMap {
    flip(f, dy, dx).expect("positive dims")
}

/// Iterated-product data on `(A, B, C)` with `E(b ⊗ b') = 1 ⊗ bb' ⊗ 1`.
pub fn with_trivial_e(
    a: &FinAlgebra,
    b: &FinAlgebra,
    c: &FinAlgebra,
    r1: TensorMap,
    r2: TensorMap,
    r3: TensorMap,
) -> TwoSidedData {
    TwoSidedData::new(a.clone(), b.as_pointed(), c.clone(), r1, r2, r3, trivial_e(a, b, c).expect("shapes"))
        .expect("shapes")
}

/// All maps flips, `E` from the product of `b`.
pub fn flip_trivial(a: &FinAlgebra, b: &FinAlgebra, c: &FinAlgebra) -> TwoSidedData {
    let f = a.field();
    let (na, nb, nc) = (a.dim(), b.dim(), c.dim());
    with_trivial_e(a, b, c, flip_map(f, nb, na), flip_map(f, nc, nb), flip_map(f, nc, na))
}

/// `(D, D, D)` with the three graded flips: the super triple tensor product.
pub fn super_dual(f: Field) -> TwoSidedData {
    let d = dual(f);
    with_trivial_e(&d, &d, &d, graded_flip(f, 2, 2), graded_flip(f, 2, 2), graded_flip(f, 2, 2))
}

/// [`super_dual`] with `E(x ⊗ x) = x ⊗ 1 ⊗ 1`; equiv5 and equiv6 fail.
pub fn perturbed_super_dual(f: Field) -> TwoSidedData {
    let mut d = super_dual(f);
    // column (x, x); row (x, 1, 1) = flat index 4
    let col = 3;
    for row in 0..8 {
        d.e.set(row, col, f.zero());
    }
    d.e.set(4, col, f.one());
    d
}

/// `(D, D, D)` over Q with diagonal twists `q1 = 2`, `q2 = 3`, `q3 = −1/2`.
pub fn q_twists() -> TwoSidedData {
    let f = Field::Rationals;
    let d = dual(f);
    let q3 = f.parse("-1/2").expect("scalar");
    with_trivial_e(&d, &d, &d, twist(f, 2, 2, &f.from_i64(2)), twist(f, 2, 2, &f.from_i64(3)), twist(f, 2, 2, &q3))
}

/// `R1 = flip`, `R2`, `R3` graded flips on `(D, D, D)` over Q.
pub fn flip_r1(f: Field) -> TwoSidedData {
    let d = dual(f);
    with_trivial_e(&d, &d, &d, flip_map(f, 2, 2), graded_flip(f, 2, 2), graded_flip(f, 2, 2))
}

/// `R1`, `R2` graded flips, `R3 = flip` on `(D, D, D)`.
pub fn flip_r3(f: Field) -> TwoSidedData {
    let d = dual(f);
    with_trivial_e(&d, &d, &d, graded_flip(f, 2, 2), graded_flip(f, 2, 2), flip_map(f, 2, 2))
}

/// `A = Q[a]/(a² − 2)`, `V = span{1, v}`, `C = Q[c]/(c² − 3)`, `R1`, `R3`
/// flips, `R2(c ⊗ v) = −v ⊗ c`, `E(v ⊗ v) = a ⊗ 1 ⊗ 1`. `V` carries no
/// algebra structure of its own.
pub fn quadratic_mixed() -> TwoSidedData {
    let f = Field::Rationals;
    let a = quadratic(f, 2);
    let c = quadratic(f, 3);
    let v = PointedSpace::standard(f, 2).expect("dim 2");
    let e = TensorMap::from_basis_images(f, shape(&[2, 2]), shape(&[2, 2, 2]), |ix| match (ix[0], ix[1]) {
        (1, 1) => basis_vec(f, 8, 4),
        (i, j) => basis_vec(f, 8, 2 * (i + j)),
    })
    .expect("shapes");
    TwoSidedData::new(a, v, c, flip_map(f, 2, 2), graded_flip(f, 2, 2), flip_map(f, 2, 2), e).expect("shapes")
}

fn matrix(f: Field, rows: &[&[i64]]) -> TensorMap {
    let n = rows.len();
    let rows = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
    TensorMap::from_rows(f, shape(&[n]), shape(&[n]), rows).expect("square")
}

/// [`super_dual`] over Q in bases where no unit is a basis vector.
pub fn super_dual_rebased() -> TwoSidedData {
    let f = Field::Rationals;
    transport_data(
        &super_dual(f),
        &matrix(f, &[&[1, 0], &[1, 1]]),
        &matrix(f, &[&[1, 0], &[2, 1]]),
        &matrix(f, &[&[2, 0], &[0, 1]]),
    )
    .expect("invertible")
}

/// Flip data on `(D, D, D)` over F2 in bases with unit `(1, 1)`.
pub fn flip_dual_f2_rebased() -> TwoSidedData {
    let f = Field::Prime(2);
    let d = dual(f);
    let phi = matrix(f, &[&[1, 0], &[1, 1]]);
    transport_data(&flip_trivial(&d, &d, &d), &phi, &phi, &phi).expect("invertible")
}

/// `(k, D, k)`: only `V` is nontrivial.
pub fn ground_dual_ground(f: Field) -> TwoSidedData {
    flip_trivial(&FinAlgebra::ground(f), &dual(f), &FinAlgebra::ground(f))
}

/// `(T2, D, D)` with flips.
pub fn triangular_dual_dual(f: Field) -> TwoSidedData {
    flip_trivial(&upper_triangular(f), &dual(f), &dual(f))
}

/// The search space used for the F2 search fixtures: `A = C = D`,
/// `V = F2²` pointed by its first basis vector.
pub fn f2_search_input() -> (FinAlgebra, PointedSpace, FinAlgebra) {
    let f = Field::Prime(2);
    (dual(f), PointedSpace::standard(f, 2).expect("dim 2"), dual(f))
}

/// Three solutions of the unrestricted exhaustive search over F2 at dims
/// (2, 2, 2), taken at the quartiles of the canonical order.
pub fn searched_f2() -> Vec<TwoSidedData> {
    let f = Field::Prime(2);
    let (a, v, c) = f2_search_input();
    let all = search_fp(&SearchSpec::exhaustive(f), &a, &v, &c).expect("space within cap");
    let n = all.len();
    [n / 4, n / 2, 3 * n / 4].iter().map(|&i| all[i].clone()).collect()
}

/// The fixed corpus of valid data (no search involved).
pub fn static_corpus() -> Vec<(&'static str, TwoSidedData)> {
    let q = Field::Rationals;
    let f2 = Field::Prime(2);
    let f3 = Field::Prime(3);
    vec![
        ("flip-dual-Q", flip_trivial(&dual(q), &dual(q), &dual(q))),
        // in characteristic 2 the graded flip is the flip
        ("super-dual-F2", super_dual(f2)),
        ("super-dual-Q", super_dual(q)),
        ("super-dual-F3", super_dual(f3)),
        ("ground-dual-ground-Q", ground_dual_ground(q)),
        ("triangular-dual-dual-Q", triangular_dual_dual(q)),
        ("q-twists-Q", q_twists()),
        ("quadratic-mixed-Q", quadratic_mixed()),
        ("flip-r1-Q", flip_r1(q)),
        ("flip-r3-Q", flip_r3(q)),
        ("super-dual-rebased-Q", super_dual_rebased()),
        ("flip-dual-rebased-F2", flip_dual_f2_rebased()),
    ]
}

/// [`static_corpus`] followed by the three [`searched_f2`] solutions.
pub fn corpus() -> Vec<(&'static str, TwoSidedData)> {
    let mut out = static_corpus();
    for (name, d) in ["searched-F2-0", "searched-F2-1", "searched-F2-2"].into_iter().zip(searched_f2()) {
        out.push((name, d));
    }
    out
}

/// Group-like coalgebra on `n` elements over `f` with data for the
/// coalgebra-based construction: `A = B = k`, `R`, `T` flips,
/// `G(g_i ⊗ g_j) = 1 ⊗ g_(i+j mod n)` and `τ(g_i, g_j) = tau[i][j]`.
pub fn grouplike_ma(f: Field, n: usize, tau: &[&[i64]]) -> Result<MaData> {
    let h = Coalgebra::grouplike(f, n)?;
    let k = FinAlgebra::ground(f);
    let g = TensorMap::from_basis_images(f, shape(&[n, n]), shape(&[1, n]), |ix| basis_vec(f, n, (ix[0] + ix[1]) % n))?;
    let tau = TensorMap::from_basis_images(f, shape(&[n, n]), shape(&[1]), |ix| vec![f.from_i64(tau[ix[0]][ix[1]])])?;
    MaData::new(h, k.clone(), k, g, flip(f, n, 1)?, flip(f, 1, n)?, tau)
}

//! Ready-made instances of the two-sided construction: iterated twisted
//! tensor products, the coalgebra-based data `(H, A, B, G, R, T, τ)`, and the
//! rewritings of `A ▷ V ◁ C` on `V ⊗ (A ⊗ C)` when `R1` or `R3` is the flip.

use alloc::vec::Vec;

use crate::algebra::{algebra_from_products, ordinary_tensor, Coalgebra, FinAlgebra};
use crate::crossed::{
    build_ttp, check_mirror, check_twisting, compare_algebras, expect_shape, mirror_product, MirrorData,
};
use crate::error::{Error, Result};
use crate::report::{first_failure, tuples, Report, Witness};
use crate::scalar::Scalar;
use crate::tensor::{add_outer, basis_vec, flip, kron, permutation, zero_vec, Factor, TensorMap, TensorShape};
use crate::twosided::{build_twosided, check_composite, check_twosided, TwoSidedData};

fn shape(dims: &[usize]) -> Result<TensorShape> {
    TensorShape::new(dims.to_vec())
}

/// `E(b ⊗ b') = 1_A ⊗ bb' ⊗ 1_C`.
pub fn trivial_e(a: &FinAlgebra, b: &FinAlgebra, c: &FinAlgebra) -> Result<TensorMap> {
    let f = a.field();
    TensorMap::from_basis_images(f, shape(&[b.dim(), b.dim()])?, shape(&[a.dim(), b.dim(), c.dim()])?, |ix| {
        kron(f, &kron(f, a.unit(), b.mul_basis(ix[0], ix[1])), c.unit())
    })
}

/// Data of the iterated twisted tensor product `A ⊗_R1 B ⊗_R2 C` with
/// `R1: B ⊗ A → A ⊗ B`, `R2: C ⊗ B → B ⊗ C`, `R3: C ⊗ A → A ⊗ C`.
pub fn iterated_data(
    a: &FinAlgebra,
    b: &FinAlgebra,
    c: &FinAlgebra,
    r1: &TensorMap,
    r2: &TensorMap,
    r3: &TensorMap,
) -> Result<TwoSidedData> {
    TwoSidedData::new(a.clone(), b.as_pointed(), c.clone(), r1.clone(), r2.clone(), r3.clone(), trivial_e(a, b, c)?)
}

/// Iterated twisted tensor product. The three maps must be twisting maps
/// (labels `twisting-R1`, `twisting-R2`, `twisting-R3`) satisfying the braid
/// relation (`braidV`).
pub fn iterated_ttp(
    a: &FinAlgebra,
    b: &FinAlgebra,
    c: &FinAlgebra,
    r1: &TensorMap,
    r2: &TensorMap,
    r3: &TensorMap,
) -> Result<FinAlgebra> {
    let d = iterated_data(a, b, c, r1, r2, r3)?;
    let first = |r: Report| r.conditions.into_iter().find_map(|c| c.witness);
    let mut report = Report::default();
    report.push("twisting-R1", first(check_twisting(r1, a, b)?));
    report.push("twisting-R2", first(check_twisting(r2, b, c)?));
    report.push("twisting-R3", first(check_twisting(r3, a, c)?));
    report.push("braidV", first(check_composite(&d)?.only("braidV")));
    if !report.all_pass() {
        return Err(Error::AxiomFailure(report));
    }
    build_twosided(&d)
}

/// Data `(H, A, B, G, R, T, τ)` with `G: H ⊗ H → A ⊗ H`, `R: H ⊗ A → A ⊗ H`,
/// `T: B ⊗ H → H ⊗ B`, `τ: H ⊗ H → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaData {
    pub h: Coalgebra,
    pub a: FinAlgebra,
    pub b: FinAlgebra,
    pub g: TensorMap,
    pub r: TensorMap,
    pub t: TensorMap,
    pub tau: TensorMap,
}

impl MaData {
    pub fn new(
        h: Coalgebra,
        a: FinAlgebra,
        b: FinAlgebra,
        g: TensorMap,
        r: TensorMap,
        t: TensorMap,
        tau: TensorMap,
    ) -> Result<Self> {
        let f = a.field();
        if [h.field(), b.field(), g.field(), r.field(), t.field(), tau.field()].iter().any(|&x| x != f) {
            return Err(Error::FieldMismatch);
        }
        let (nh, na, nb) = (h.dim(), a.dim(), b.dim());
        expect_shape("G", &g, &[nh, nh], &[na, nh])?;
        expect_shape("R", &r, &[nh, na], &[na, nh])?;
        expect_shape("T", &t, &[nb, nh], &[nh, nb])?;
        if tau.domain().dims() != [nh, nh] || tau.codomain().total() != nb {
            return Err(crate::error::shape_mismatch(
                "tau",
                ([nh, nh], nb),
                (tau.domain().dims(), tau.codomain().total()),
            ));
        }
        Ok(MaData { h, a, b, g, r, t, tau })
    }
}

/// Assembles `R1 = R`, `R2 = T`, `R3 = flip`,
/// `E(h ⊗ h') = (h_1)^G ⊗ (h'_1)_G ⊗ τ(h_2, h'_2)` without checking.
pub fn ma_data(d: &MaData) -> Result<TwoSidedData> {
    let f = d.a.field();
    let (nh, na, nb) = (d.h.dim(), d.a.dim(), d.b.dim());
    let comul_terms = |h: usize| {
        d.h.comul()
            .column(h)
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(r, x)| (x.clone(), r / nh, r % nh))
            .collect::<Vec<_>>()
    };
    let e = TensorMap::from_basis_images(f, shape(&[nh, nh])?, shape(&[na, nh, nb])?, |ix| {
        let mut out = zero_vec(f, na * nh * nb);
        for (k1, h1, h2) in comul_terms(ix[0]) {
            for (k2, g1, g2) in comul_terms(ix[1]) {
                add_outer(
                    &mut out,
                    &[na * nh, nb],
                    &(&k1 * &k2),
                    &[Factor::Dense(d.g.column2(h1, g1)), Factor::Dense(d.tau.column2(h2, g2))],
                );
            }
        }
        out
    })?;
    TwoSidedData::new(d.a.clone(), d.h.as_pointed(), d.b.clone(), d.r.clone(), d.t.clone(), flip(f, nb, na)?, e)
}

/// [`ma_data`] followed by the full condition check.
pub fn ma_build(d: &MaData) -> Result<TwoSidedData> {
    let data = ma_data(d)?;
    let report = check_twosided(&data);
    if !report.all_pass() {
        return Err(Error::AxiomFailure(report));
    }
    Ok(data)
}

/// Moves `A ⊗ V ⊗ C` to `V ⊗ A ⊗ C`.
pub fn avc_to_vac(d: &TwoSidedData) -> Result<TensorMap> {
    permutation(d.a.field(), &d.dims(), &[1, 0, 2])
}

/// `P((a ⊗ c) ⊗ v) = v_R2 ⊗ (a ⊗ c_R2)` on flattened `A ⊗ C`.
fn p_map(d: &TwoSidedData) -> Result<TensorMap> {
    let f = d.a.field();
    let [na, nv, nc] = d.dims();
    TensorMap::from_basis_images(f, shape(&[na * nc, nv])?, shape(&[nv, na * nc])?, |ix| {
        let (a, c) = (ix[0] / nc, ix[0] % nc);
        let mut out = zero_vec(f, nv * na * nc);
        for (k, v1, c1) in d.r2.terms2(c, ix[1]) {
            add_outer(&mut out, &[nv, na, nc], k, &[Factor::Basis(v1), Factor::Basis(a), Factor::Basis(c1)]);
        }
        out
    })
}

/// Result of rewriting `A ▷ V ◁ C` with `R1 = flip` as a mirror crossed
/// product `V ⊗̄_{P,ν} (A ⊗_R3 C)`.
#[derive(Clone, Debug)]
pub struct Remark1 {
    pub mirror: MirrorData,
    /// Mirror conditions followed by `mirror-equals-transported`.
    pub report: Report,
}

pub fn remark1_transport(d: &TwoSidedData) -> Result<Remark1> {
    let f = d.a.field();
    let [na, nv, nc] = d.dims();
    if d.r1 != flip(f, nv, na)? {
        return Err(Error::Precondition("R1 must be the flip map"));
    }
    let built = build_twosided(d)?;
    let b = build_ttp(&d.a, &d.c, &d.r3)?;
    let nu = TensorMap::from_basis_images(f, shape(&[nv, nv])?, shape(&[nv, na * nc])?, |ix| {
        let mut out = zero_vec(f, nv * na * nc);
        for (k, ea, ev, ec) in d.e.terms3(ix[0], ix[1]) {
            add_outer(&mut out, &[nv, na, nc], k, &[Factor::Basis(ev), Factor::Basis(ea), Factor::Basis(ec)]);
        }
        out
    })?;
    let mirror = MirrorData::new(d.v.clone(), b, p_map(d)?, nu)?;
    let mut report = check_mirror(&mirror);
    let transported = built.transport(&avc_to_vac(d)?)?;
    report.push(
        "mirror-equals-transported",
        compare_algebras("mirror product = transported product", &mirror_product(&mirror)?, &transported),
    );
    Ok(Remark1 { mirror, report })
}

/// The maps `J, T, γ, η` on `V` and `B = A ⊗ C` (flattened to one factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LRData {
    /// `J: B ⊗ V → V ⊗ B`
    pub j: TensorMap,
    /// `T: V ⊗ B → V ⊗ B`
    pub t: TensorMap,
    /// `γ: V ⊗ V → V ⊗ V ⊗ B`
    pub gamma: TensorMap,
    /// `η: V ⊗ V → V ⊗ B ⊗ B`
    pub eta: TensorMap,
    /// The ordinary tensor product `A ⊗ C`.
    pub b: FinAlgebra,
}

#[derive(Clone, Debug)]
pub struct Remark2 {
    pub lr: LRData,
    /// Multiplication on `V ⊗ (A ⊗ C)` from the general L-R formula.
    pub algebra: FinAlgebra,
    /// `lr-general-equals-transported`, `lr-expanded-equals-transported`.
    pub report: Report,
    /// A basis tuple `(v, a, c, a', c')` with
    /// `(v ⊗ (a ⊗ c)) • (1_V ⊗ (a' ⊗ c')) ≠ v ⊗ (a ⊗ c)(a' ⊗ c')`, if any.
    /// Informational: such a tuple shows `•` is not a mirror crossed product
    /// over the ordinary `A ⊗ C`.
    pub finding: Option<Witness>,
}

pub fn lr_data(d: &TwoSidedData) -> Result<LRData> {
    let f = d.a.field();
    let [na, nv, nc] = d.dims();
    let nb = na * nc;
    let b = ordinary_tensor(&d.a, &d.c)?;
    let vb = [nv, na, nc];
    let t = TensorMap::from_basis_images(f, shape(&[nv, nb])?, shape(&[nv, nb])?, |ix| {
        let (a, c) = (ix[1] / nc, ix[1] % nc);
        let mut out = zero_vec(f, nv * nb);
        for (k, a1, v1) in d.r1.terms2(ix[0], a) {
            add_outer(&mut out, &vb, k, &[Factor::Basis(v1), Factor::Basis(a1), Factor::Basis(c)]);
        }
        out
    })?;
    let one_b = kron(f, d.a.unit(), d.c.unit());
    let gamma = TensorMap::from_basis_images(f, shape(&[nv, nv])?, shape(&[nv, nv, nb])?, |ix| {
        let vv = kron(f, &basis_vec(f, nv, ix[0]), &basis_vec(f, nv, ix[1]));
        kron(f, &vv, &one_b)
    })?;
    let eta = TensorMap::from_basis_images(f, shape(&[nv, nv])?, shape(&[nv, nb, nb])?, |ix| {
        let mut out = zero_vec(f, nv * nb * nb);
        for (k, ea, ev, ec) in d.e.terms3(ix[0], ix[1]) {
            add_outer(
                &mut out,
                &[nv, na, nc, na, nc],
                k,
                &[
                    Factor::Basis(ev),
                    Factor::Dense(d.a.unit()),
                    Factor::Basis(ec),
                    Factor::Basis(ea),
                    Factor::Dense(d.c.unit()),
                ],
            );
        }
        out
    })?;
    Ok(LRData { j: p_map(d)?, t, gamma, eta, b })
}

/// The L-R product
/// `η_1(γ_1_T, γ_2_J) ⊗ η_2(…) (a ⊗ c)_J γ_3 (a' ⊗ c')_T η_3(…)`.
pub fn lr_product(lr: &LRData, v_unit: &[Scalar]) -> Result<FinAlgebra> {
    let f = lr.b.field();
    let b = &lr.b;
    let dims = [v_unit.len(), b.dim()];
    algebra_from_products(f, &dims, kron(f, v_unit, b.unit()), |x, y, out| {
        for (k1, g1, g2, g3) in lr.gamma.terms3(x[0], y[0]) {
            for (k2, tv, bt) in lr.t.terms2(g1, y[1]) {
                let k12 = k1 * k2;
                for (k3, jv, bj) in lr.j.terms2(x[1], g2) {
                    let k123 = &k12 * k3;
                    for (k4, n1, n2, n3) in lr.eta.terms3(tv, jv) {
                        let mut prod = b.mul_basis(n2, bj).to_vec();
                        for k in [g3, bt, n3] {
                            prod = b.mul_vec_basis(&prod, k);
                        }
                        add_outer(out, &dims, &(&k123 * k4), &[Factor::Basis(n1), Factor::Dense(&prod)]);
                    }
                }
            }
        }
    })
}

/// The expanded form
/// `E_V(v_R1, v'_R2) ⊗ (a a'_R1 E_A(v_R1, v'_R2) ⊗ E_C(v_R1, v'_R2) c_R2 c')`.
pub fn lr_expanded_product(d: &TwoSidedData) -> Result<FinAlgebra> {
    let f = d.a.field();
    let [na, nv, nc] = d.dims();
    let dims = [nv, na, nc];
    let unit = kron(f, &kron(f, d.v.unit(), d.a.unit()), d.c.unit());
    algebra_from_products(f, &dims, unit, |x, y, out| {
        let (v, a, c) = (x[0], x[1], x[2]);
        let (w, a2, c2) = (y[0], y[1], y[2]);
        for (k1, a1, v1) in d.r1.terms2(v, a2) {
            for (k2, w1, c1) in d.r2.terms2(c, w) {
                let k12 = k1 * k2;
                for (k3, ea, ev, ec) in d.e.terms3(v1, w1) {
                    let left = d.a.mul_vec_basis(d.a.mul_basis(a, a1), ea);
                    let right = d.c.mul_vec_basis(d.c.mul_basis(ec, c1), c2);
                    add_outer(
                        out,
                        &dims,
                        &(&k12 * k3),
                        &[Factor::Basis(ev), Factor::Dense(&left), Factor::Dense(&right)],
                    );
                }
            }
        }
    })
}

/// Rewrites `A ▷ V ◁ C` with `R3 = flip` on `V ⊗ (A ⊗ C)` and compares both
/// L-R formulas with the transported two-sided product.
pub fn remark2_lr(d: &TwoSidedData) -> Result<Remark2> {
    let f = d.a.field();
    let [na, nv, nc] = d.dims();
    if d.r3 != flip(f, nc, na)? {
        return Err(Error::Precondition("R3 must be the flip map"));
    }
    let built = build_twosided(d)?;
    let transported = built.transport(&avc_to_vac(d)?)?;
    let lr = lr_data(d)?;
    let algebra = lr_product(&lr, d.v.unit())?;
    let expanded = lr_expanded_product(d)?;
    let mut report = Report::default();
    report.push(
        "lr-general-equals-transported",
        compare_algebras("L-R product = transported product", &algebra, &transported),
    );
    report.push(
        "lr-expanded-equals-transported",
        compare_algebras("expanded L-R product = transported product", &expanded, &transported),
    );
    let dims = [nv, na, nc];
    let finding = first_failure(
        "(v ⊗ (a ⊗ c)) • (1_V ⊗ (a' ⊗ c')) = v ⊗ (a ⊗ c)(a' ⊗ c')",
        tuples(&[nv, na, nc, na, nc]),
        |ix| {
            let mut x = zero_vec(f, nv * na * nc);
            add_outer(&mut x, &dims, &f.one(), &[Factor::Basis(ix[0]), Factor::Basis(ix[1]), Factor::Basis(ix[2])]);
            let mut y = zero_vec(f, nv * na * nc);
            add_outer(
                &mut y,
                &dims,
                &f.one(),
                &[Factor::Dense(d.v.unit()), Factor::Basis(ix[3]), Factor::Basis(ix[4])],
            );
            let lhs = transported.mul_unchecked(&x, &y);
            let mut rhs = zero_vec(f, nv * na * nc);
            add_outer(
                &mut rhs,
                &dims,
                &f.one(),
                &[
                    Factor::Basis(ix[0]),
                    Factor::Dense(d.a.mul_basis(ix[1], ix[3])),
                    Factor::Dense(d.c.mul_basis(ix[2], ix[4])),
                ],
            );
            (lhs, rhs)
        },
    );
    Ok(Remark2 { lr, algebra, report, finding })
}

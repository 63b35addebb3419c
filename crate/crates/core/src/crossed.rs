//! Twisting maps and twisted tensor products `A ⊗_R B`, Brzeziński crossed
//! products `A ⊗_{R,σ} V` and the mirror crossed products `W ⊗̄_{P,ν} B`.
//!
//! Sweedler-style notation is realized as explicit sums over the nonzero
//! entries of a map's columns: `R(b ⊗ a) = Σ coef · e_{a'} ⊗ e_{b'}` is
//! [`TensorMap::terms2`].

use alloc::vec::Vec;

use crate::algebra::{algebra_from_products, FinAlgebra, PointedSpace};
use crate::error::{shape_mismatch, Error, Result};
use crate::report::{first_failure, first_of, tuples, Report, Witness};
use crate::scalar::Scalar;
use crate::tensor::{add_outer, axpy, kron, zero_vec, Factor, TensorMap, TensorShape};

pub(crate) fn expect_shape(context: &'static str, map: &TensorMap, domain: &[usize], codomain: &[usize]) -> Result<()> {
    if map.domain().dims() != domain || map.codomain().dims() != codomain {
        return Err(shape_mismatch(context, (domain, codomain), (map.domain().dims(), map.codomain().dims())));
    }
    Ok(())
}

// Generic evaluators for a map `R: Y ⊗ X → X ⊗ Y`. `X` plays the role of `A`
// in a twisting map `B ⊗ A → A ⊗ B`.

/// `R(1_Y ⊗ x) = x ⊗ 1_Y` for basis `x`.
pub(crate) fn unit_through_left(
    identity: &'static str,
    r: &TensorMap,
    x_dim: usize,
    y_unit: &[Scalar],
) -> Option<Witness> {
    let f = r.field();
    first_failure(identity, tuples(&[x_dim]), |ix| {
        let e = crate::tensor::basis_vec(f, x_dim, ix[0]);
        let lhs = r.apply(&kron(f, y_unit, &e)).expect("shape checked");
        (lhs, kron(f, &e, y_unit))
    })
}

/// `R(y ⊗ 1_X) = 1_X ⊗ y` for basis `y`.
pub(crate) fn unit_through_right(
    identity: &'static str,
    r: &TensorMap,
    x_unit: &[Scalar],
    y_dim: usize,
) -> Option<Witness> {
    let f = r.field();
    first_failure(identity, tuples(&[y_dim]), |ix| {
        let e = crate::tensor::basis_vec(f, y_dim, ix[0]);
        let lhs = r.apply(&kron(f, &e, x_unit)).expect("shape checked");
        (lhs, kron(f, x_unit, &e))
    })
}

/// `(x x')_R ⊗ y_R = x_R x'_r ⊗ y_{R r}` on basis `(y, x, x')`.
pub(crate) fn mult_in_left(identity: &'static str, r: &TensorMap, x: &FinAlgebra, y_dim: usize) -> Option<Witness> {
    let f = r.field();
    let (n, m) = (x.dim(), y_dim);
    let dims = [n, m];
    first_failure(identity, tuples(&[m, n, n]), |ix| {
        let (y, x1, x2) = (ix[0], ix[1], ix[2]);
        let mut lhs = zero_vec(f, n * m);
        for (k, c) in x.mul_basis(x1, x2).iter().enumerate() {
            axpy(&mut lhs, c, r.column2(y, k));
        }
        let mut rhs = zero_vec(f, n * m);
        for (c1, a1, y1) in r.terms2(y, x1) {
            for (c2, a2, y2) in r.terms2(y1, x2) {
                add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Dense(x.mul_basis(a1, a2)), Factor::Basis(y2)]);
            }
        }
        (lhs, rhs)
    })
}

/// `x_R ⊗ (y y')_R = x_{R r} ⊗ y_r y'_R` on basis `(y, y', x)`.
pub(crate) fn mult_in_right(identity: &'static str, r: &TensorMap, x_dim: usize, y: &FinAlgebra) -> Option<Witness> {
    let f = r.field();
    let (n, m) = (x_dim, y.dim());
    let dims = [n, m];
    first_failure(identity, tuples(&[m, m, n]), |ix| {
        let (y1, y2, x) = (ix[0], ix[1], ix[2]);
        let mut lhs = zero_vec(f, n * m);
        for (k, c) in y.mul_basis(y1, y2).iter().enumerate() {
            axpy(&mut lhs, c, r.column2(k, x));
        }
        let mut rhs = zero_vec(f, n * m);
        for (c1, a1, z2) in r.terms2(y2, x) {
            for (c2, a2, z1) in r.terms2(y1, a1) {
                add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Basis(a2), Factor::Dense(y.mul_basis(z1, z2))]);
            }
        }
        (lhs, rhs)
    })
}

pub const TWISTING_LABELS: [&str; 4] =
    ["twisting-unit-left", "twisting-unit-right", "twisting-mult-left", "twisting-mult-right"];

/// Checks that `R: B ⊗ A → A ⊗ B` is a twisting map.
///
/// Witness tuples: unit conditions index the basis of `A` (resp. `B`);
/// `twisting-mult-left` is `(b, a, a')`, `twisting-mult-right` is `(b, b', a)`.
pub fn check_twisting(r: &TensorMap, a: &FinAlgebra, b: &FinAlgebra) -> Result<Report> {
    if a.field() != b.field() || r.field() != a.field() {
        return Err(Error::FieldMismatch);
    }
    expect_shape("twisting map", r, &[b.dim(), a.dim()], &[a.dim(), b.dim()])?;
    let mut report = Report::default();
    report.push(TWISTING_LABELS[0], unit_through_left("R(1 ⊗ a) = a ⊗ 1", r, a.dim(), b.unit()));
    report.push(TWISTING_LABELS[1], unit_through_right("R(b ⊗ 1) = 1 ⊗ b", r, a.unit(), b.dim()));
    report.push(TWISTING_LABELS[2], mult_in_left("(aa')_R ⊗ b_R = a_R a'_r ⊗ b_Rr", r, a, b.dim()));
    report.push(TWISTING_LABELS[3], mult_in_right("a_R ⊗ (bb')_R = a_Rr ⊗ b_r b'_R", r, a.dim(), b));
    Ok(report)
}

/// Multiplication `(a ⊗ b)(a' ⊗ b') = a a'_R ⊗ b_R b'` without validation.
pub fn ttp_product(a: &FinAlgebra, b: &FinAlgebra, r: &TensorMap) -> Result<FinAlgebra> {
    expect_shape("twisting map", r, &[b.dim(), a.dim()], &[a.dim(), b.dim()])?;
    let f = a.field();
    let dims = [a.dim(), b.dim()];
    algebra_from_products(f, &dims, kron(f, a.unit(), b.unit()), |x, y, out| {
        for (c, a1, b1) in r.terms2(x[1], y[0]) {
            add_outer(out, &dims, c, &[Factor::Dense(a.mul_basis(x[0], a1)), Factor::Dense(b.mul_basis(b1, y[1]))]);
        }
    })
}

/// Twisted tensor product `A ⊗_R B`; requires `R` to pass
/// [`check_twisting`] and re-validates associativity.
pub fn build_ttp(a: &FinAlgebra, b: &FinAlgebra, r: &TensorMap) -> Result<FinAlgebra> {
    let report = check_twisting(r, a, b)?;
    if !report.all_pass() {
        return Err(Error::AxiomFailure(report));
    }
    ttp_product(a, b, r)?.validate()
}

/// Data `(A, V, R, σ)` of a Brzeziński crossed product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrzData {
    pub a: FinAlgebra,
    pub v: PointedSpace,
    /// `R: V ⊗ A → A ⊗ V`
    pub r: TensorMap,
    /// `σ: V ⊗ V → A ⊗ V`
    pub sigma: TensorMap,
}

impl BrzData {
    pub fn new(a: FinAlgebra, v: PointedSpace, r: TensorMap, sigma: TensorMap) -> Result<Self> {
        let f = a.field();
        if v.field() != f || r.field() != f || sigma.field() != f {
            return Err(Error::FieldMismatch);
        }
        expect_shape("R", &r, &[v.dim(), a.dim()], &[a.dim(), v.dim()])?;
        expect_shape("sigma", &sigma, &[v.dim(), v.dim()], &[a.dim(), v.dim()])?;
        Ok(BrzData { a, v, r, sigma })
    }

    /// A twisting map seen as crossed product data with
    /// `σ(b ⊗ b') = 1_A ⊗ bb'`.
    pub fn from_twisting(a: &FinAlgebra, b: &FinAlgebra, r: &TensorMap) -> Result<Self> {
        let f = a.field();
        let sigma = TensorMap::from_basis_images(f, shape(&[b.dim(), b.dim()]), shape(&[a.dim(), b.dim()]), |ix| {
            kron(f, a.unit(), b.mul_basis(ix[0], ix[1]))
        })?;
        BrzData::new(a.clone(), b.as_pointed(), r.clone(), sigma)
    }
}

pub(crate) fn shape(dims: &[usize]) -> TensorShape {
    TensorShape::new(dims.to_vec()).expect("nonempty dims")
}

pub const BRZ_LABELS: [&str; 5] = ["brz1", "brz2", "brz3", "brz4", "brz5"];

/// Conditions brz1–brz5. Witness tuples: brz3 `(v, a, a')`, brz4
/// `(v, v', v'')`, brz5 `(v, v', a)`.
pub fn check_brzezinski(d: &BrzData) -> Report {
    let (a, v, r, sigma) = (&d.a, &d.v, &d.r, &d.sigma);
    let f = a.field();
    let (na, nv) = (a.dim(), v.dim());
    let dims = [na, nv];
    let mut report = Report::default();
    report.push(
        "brz1",
        first_of([
            unit_through_left("R(1_V ⊗ a) = a ⊗ 1_V", r, na, v.unit()),
            unit_through_right("R(v ⊗ 1_A) = 1_A ⊗ v", r, a.unit(), nv),
        ]),
    );
    report.push(
        "brz2",
        first_of([
            first_failure("σ(1_V ⊗ v) = 1_A ⊗ v", tuples(&[nv]), |ix| {
                let e = crate::tensor::basis_vec(f, nv, ix[0]);
                (sigma.apply(&kron(f, v.unit(), &e)).expect("shape"), kron(f, a.unit(), &e))
            }),
            first_failure("σ(v ⊗ 1_V) = 1_A ⊗ v", tuples(&[nv]), |ix| {
                let e = crate::tensor::basis_vec(f, nv, ix[0]);
                (sigma.apply(&kron(f, &e, v.unit())).expect("shape"), kron(f, a.unit(), &e))
            }),
        ]),
    );
    report.push("brz3", mult_in_left("R∘(id ⊗ μ) = (μ ⊗ id)(id ⊗ R)(R ⊗ id)", r, a, nv));
    report.push(
        "brz4",
        first_failure("σ-cocycle condition", tuples(&[nv, nv, nv]), |ix| {
            let (v0, v1, v2) = (ix[0], ix[1], ix[2]);
            let mut lhs = zero_vec(f, na * nv);
            for (c1, s1, s2) in sigma.terms2(v1, v2) {
                for (c2, s1r, vr) in r.terms2(v0, s1) {
                    let c12 = c1 * c2;
                    for (c3, t1, t2) in sigma.terms2(vr, s2) {
                        add_outer(
                            &mut lhs,
                            &dims,
                            &(&c12 * c3),
                            &[Factor::Dense(a.mul_basis(s1r, t1)), Factor::Basis(t2)],
                        );
                    }
                }
            }
            let mut rhs = zero_vec(f, na * nv);
            for (c1, s1, s2) in sigma.terms2(v0, v1) {
                for (c2, t1, t2) in sigma.terms2(s2, v2) {
                    add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Dense(a.mul_basis(s1, t1)), Factor::Basis(t2)]);
                }
            }
            (lhs, rhs)
        }),
    );
    report.push(
        "brz5",
        first_failure("σ–R compatibility", tuples(&[nv, nv, na]), |ix| {
            let (v0, v1, x) = (ix[0], ix[1], ix[2]);
            let mut lhs = zero_vec(f, na * nv);
            for (c1, a1, v1r) in r.terms2(v1, x) {
                for (c2, a2, v0r) in r.terms2(v0, a1) {
                    let c12 = c1 * c2;
                    for (c3, s1, s2) in sigma.terms2(v0r, v1r) {
                        add_outer(
                            &mut lhs,
                            &dims,
                            &(&c12 * c3),
                            &[Factor::Dense(a.mul_basis(a2, s1)), Factor::Basis(s2)],
                        );
                    }
                }
            }
            let mut rhs = zero_vec(f, na * nv);
            for (c1, s1, s2) in sigma.terms2(v0, v1) {
                for (c2, a1, s2r) in r.terms2(s2, x) {
                    add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Dense(a.mul_basis(s1, a1)), Factor::Basis(s2r)]);
                }
            }
            (lhs, rhs)
        }),
    );
    report
}

/// `(a ⊗ v)(a' ⊗ v') = a a'_R σ_1(v_R, v') ⊗ σ_2(v_R, v')` without validation.
pub fn brzezinski_product(d: &BrzData) -> Result<FinAlgebra> {
    let (a, v, r, sigma) = (&d.a, &d.v, &d.r, &d.sigma);
    let f = a.field();
    let dims = [a.dim(), v.dim()];
    algebra_from_products(f, &dims, kron(f, a.unit(), v.unit()), |x, y, out| {
        for (c1, a1, vr) in r.terms2(x[1], y[0]) {
            let aa1 = a.mul_basis(x[0], a1);
            for (c2, s1, s2) in sigma.terms2(vr, y[1]) {
                let prod = a.mul_vec_basis(aa1, s1);
                add_outer(out, &dims, &(c1 * c2), &[Factor::Dense(&prod), Factor::Basis(s2)]);
            }
        }
    })
}

/// Crossed product `A ⊗_{R,σ} V`; requires brz1–brz5 and re-validates.
pub fn build_brzezinski(d: &BrzData) -> Result<FinAlgebra> {
    let report = check_brzezinski(d);
    if !report.all_pass() {
        return Err(Error::AxiomFailure(report));
    }
    brzezinski_product(d)?.validate()
}

/// Data `(W, B, P, ν)` of a mirror crossed product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorData {
    pub w: PointedSpace,
    pub b: FinAlgebra,
    /// `P: B ⊗ W → W ⊗ B`
    pub p: TensorMap,
    /// `ν: W ⊗ W → W ⊗ B`
    pub nu: TensorMap,
}

impl MirrorData {
    pub fn new(w: PointedSpace, b: FinAlgebra, p: TensorMap, nu: TensorMap) -> Result<Self> {
        let f = b.field();
        if w.field() != f || p.field() != f || nu.field() != f {
            return Err(Error::FieldMismatch);
        }
        expect_shape("P", &p, &[b.dim(), w.dim()], &[w.dim(), b.dim()])?;
        expect_shape("nu", &nu, &[w.dim(), w.dim()], &[w.dim(), b.dim()])?;
        Ok(MirrorData { w, b, p, nu })
    }

    /// A twisting map `R: B ⊗ A → A ⊗ B` seen as mirror data on `A ⊗ B`
    /// with `ν(a ⊗ a') = aa' ⊗ 1_B`.
    pub fn from_twisting(a: &FinAlgebra, b: &FinAlgebra, r: &TensorMap) -> Result<Self> {
        let f = a.field();
        let nu = TensorMap::from_basis_images(f, shape(&[a.dim(), a.dim()]), shape(&[a.dim(), b.dim()]), |ix| {
            kron(f, a.mul_basis(ix[0], ix[1]), b.unit())
        })?;
        MirrorData::new(a.as_pointed(), b.clone(), r.clone(), nu)
    }
}

pub const MIRROR_LABELS: [&str; 5] = ["mirtwunit", "mircocunit", "mirtwmap", "mir1", "mir2"];

/// Conditions mirtwunit, mircocunit, mirtwmap, mir1, mir2. Witness tuples:
/// mirtwmap `(b, b', w)`, mir1 `(w, w', w'')`, mir2 `(b, w, w')`.
pub fn check_mirror(d: &MirrorData) -> Report {
    let (w, b, p, nu) = (&d.w, &d.b, &d.p, &d.nu);
    let f = b.field();
    let (nw, nb) = (w.dim(), b.dim());
    let dims = [nw, nb];
    let mut report = Report::default();
    report.push(
        "mirtwunit",
        first_of([
            unit_through_right("P(b ⊗ 1_W) = 1_W ⊗ b", p, w.unit(), nb),
            unit_through_left("P(1_B ⊗ w) = w ⊗ 1_B", p, nw, b.unit()),
        ]),
    );
    report.push(
        "mircocunit",
        first_of([
            first_failure("ν(w ⊗ 1_W) = w ⊗ 1_B", tuples(&[nw]), |ix| {
                let e = crate::tensor::basis_vec(f, nw, ix[0]);
                (nu.apply(&kron(f, &e, w.unit())).expect("shape"), kron(f, &e, b.unit()))
            }),
            first_failure("ν(1_W ⊗ w) = w ⊗ 1_B", tuples(&[nw]), |ix| {
                let e = crate::tensor::basis_vec(f, nw, ix[0]);
                (nu.apply(&kron(f, w.unit(), &e)).expect("shape"), kron(f, &e, b.unit()))
            }),
        ]),
    );
    report.push("mirtwmap", mult_in_right("P∘(μ ⊗ id) = (id ⊗ μ)(P ⊗ id)(id ⊗ P)", p, nw, b));
    report.push(
        "mir1",
        first_failure("ν-cocycle condition", tuples(&[nw, nw, nw]), |ix| {
            let (w0, w1, w2) = (ix[0], ix[1], ix[2]);
            let mut lhs = zero_vec(f, nw * nb);
            for (c1, n1, n2) in nu.terms2(w0, w1) {
                for (c2, w2p, n2p) in p.terms2(n2, w2) {
                    let c12 = c1 * c2;
                    for (c3, m1, m2) in nu.terms2(n1, w2p) {
                        add_outer(
                            &mut lhs,
                            &dims,
                            &(&c12 * c3),
                            &[Factor::Basis(m1), Factor::Dense(b.mul_basis(m2, n2p))],
                        );
                    }
                }
            }
            let mut rhs = zero_vec(f, nw * nb);
            for (c1, n1, n2) in nu.terms2(w1, w2) {
                for (c2, m1, m2) in nu.terms2(w0, n1) {
                    add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Basis(m1), Factor::Dense(b.mul_basis(m2, n2))]);
                }
            }
            (lhs, rhs)
        }),
    );
    report.push(
        "mir2",
        first_failure("ν–P compatibility", tuples(&[nb, nw, nw]), |ix| {
            let (y, w0, w1) = (ix[0], ix[1], ix[2]);
            let mut lhs = zero_vec(f, nw * nb);
            for (c1, w0p, b1) in p.terms2(y, w0) {
                for (c2, w1p, b2) in p.terms2(b1, w1) {
                    let c12 = c1 * c2;
                    for (c3, n1, n2) in nu.terms2(w0p, w1p) {
                        add_outer(
                            &mut lhs,
                            &dims,
                            &(&c12 * c3),
                            &[Factor::Basis(n1), Factor::Dense(b.mul_basis(n2, b2))],
                        );
                    }
                }
            }
            let mut rhs = zero_vec(f, nw * nb);
            for (c1, n1, n2) in nu.terms2(w0, w1) {
                for (c2, n1p, b1) in p.terms2(y, n1) {
                    add_outer(&mut rhs, &dims, &(c1 * c2), &[Factor::Basis(n1p), Factor::Dense(b.mul_basis(b1, n2))]);
                }
            }
            (lhs, rhs)
        }),
    );
    report
}

/// `(w ⊗ b)(w' ⊗ b') = ν_1(w, w'_P) ⊗ ν_2(w, w'_P) b_P b'` without
/// validation.
pub fn mirror_product(d: &MirrorData) -> Result<FinAlgebra> {
    let (w, b, p, nu) = (&d.w, &d.b, &d.p, &d.nu);
    let f = b.field();
    let dims = [w.dim(), b.dim()];
    algebra_from_products(f, &dims, kron(f, w.unit(), b.unit()), |x, y, out| {
        for (c1, wp, bp) in p.terms2(x[1], y[0]) {
            for (c2, n1, n2) in nu.terms2(x[0], wp) {
                let prod = b.mul_vec_basis(b.mul_basis(n2, bp), y[1]);
                add_outer(out, &dims, &(c1 * c2), &[Factor::Basis(n1), Factor::Dense(&prod)]);
            }
        }
    })
}

/// Mirror crossed product `W ⊗̄_{P,ν} B`; requires all five conditions and
/// re-validates.
pub fn build_mirror(d: &MirrorData) -> Result<FinAlgebra> {
    let report = check_mirror(d);
    if !report.all_pass() {
        return Err(Error::AxiomFailure(report));
    }
    mirror_product(d)?.validate()
}

/// Exact comparison of two algebras' structure constants; witness is the
/// first basis pair whose products differ.
pub fn compare_algebras(identity: &'static str, x: &FinAlgebra, y: &FinAlgebra) -> Option<Witness> {
    if x.dim() != y.dim() {
        return Some(Witness {
            indices: alloc::vec![x.dim(), y.dim()],
            identity: "dimensions agree",
            lhs: Vec::new(),
            rhs: Vec::new(),
        });
    }
    let n = x.dim();
    first_of([
        first_failure("units agree", tuples(&[1]), |_| (x.unit().to_vec(), y.unit().to_vec())),
        first_failure(identity, tuples(&[n, n]), |ix| {
            (x.mul_basis(ix[0], ix[1]).to_vec(), y.mul_basis(ix[0], ix[1]).to_vec())
        }),
    ])
}

//! Search for two-sided crossed product data over a prime field.
//!
//! The unit conditions (twR31, unit-R1, unit-R2, unit-E) are linear in the
//! matrix entries, so each map ranges over an affine space solved for up
//! front. Exhaustive mode then prunes in stages: `R3` by twR32/twR33, `R1` by
//! equiv1, `R2` by equiv2, triples by equiv3, and finally each `E` by the
//! remaining conditions. Every reported dataset passes the full
//! [`check_twosided`](crate::twosided::check_twosided).

use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{FinAlgebra, PointedSpace};
use crate::crossed::{mult_in_left, mult_in_right};
use crate::error::{Error, Result};
use crate::linalg::affine_solutions;
use crate::scalar::{Field, Scalar};
use crate::tensor::{axpy, basis_vec, kron, TensorMap, TensorShape};
use crate::twosided::{evaluate_condition, TwoSidedData, CONDITION_LABELS};

/// Default bound on the exhaustive candidate count.
pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// `budget` independent samples; sample `i` draws from a ChaCha8 stream
    /// `i` seeded by `seed`, so results do not depend on how work is split.
    Randomized {
        budget: u64,
        seed: u64,
    },
}

/// Maps held fixed during the search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Frozen {
    pub r1: Option<TensorMap>,
    pub r2: Option<TensorMap>,
    pub r3: Option<TensorMap>,
    pub e: Option<TensorMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub field: Field,
    pub mode: SearchMode,
    pub frozen: Frozen,
    pub cap: u128,
}

impl SearchSpec {
    pub fn exhaustive(field: Field) -> Self {
        SearchSpec { field, mode: SearchMode::Exhaustive, frozen: Frozen::default(), cap: DEFAULT_CAP }
    }
}

/// Affine family `particular + Σ t_i · null_i` of maps, entries stored column
/// by column.
#[derive(Clone, Debug)]
struct MapSpace {
    field: Field,
    p: u32,
    domain: TensorShape,
    codomain: TensorShape,
    particular: Vec<Scalar>,
    null: Vec<Vec<Scalar>>,
}

impl MapSpace {
    /// Maps `domain → codomain` sending each `input` to its `target`.
    fn solve(
        field: Field,
        domain: &[usize],
        codomain: &[usize],
        constraints: &[(Vec<Scalar>, Vec<Scalar>)],
    ) -> Option<Self> {
        let p = field.modulus().expect("prime field");
        let domain = TensorShape::new(domain.to_vec()).ok()?;
        let codomain = TensorShape::new(codomain.to_vec()).ok()?;
        let (rows, cols) = (codomain.total(), domain.total());
        let nvars = rows * cols;
        let mut system = Vec::new();
        for (input, target) in constraints {
            for (r, t) in target.iter().enumerate() {
                let mut eq = alloc::vec![field.zero(); nvars + 1];
                for (col, u) in input.iter().enumerate() {
                    eq[col * rows + r] = u.clone();
                }
                eq[nvars] = t.clone();
                system.push(eq);
            }
        }
        let (particular, null) = affine_solutions(field, nvars, system)?;
        Some(MapSpace { field, p, domain, codomain, particular, null })
    }

    fn fixed(map: &TensorMap) -> Self {
        let cols = map.domain().total();
        MapSpace {
            field: map.field(),
            p: map.field().modulus().expect("prime field"),
            domain: map.domain().clone(),
            codomain: map.codomain().clone(),
            particular: (0..cols).flat_map(|j| map.column(j).to_vec()).collect(),
            null: Vec::new(),
        }
    }

    fn count(&self) -> u128 {
        (self.p as u128).checked_pow(self.null.len() as u32).unwrap_or(u128::MAX)
    }

    fn with_coefficients(&self, coefs: impl Iterator<Item = u64>) -> TensorMap {
        let mut x = self.particular.clone();
        for (t, v) in coefs.zip(&self.null) {
            axpy(&mut x, &self.field.residue(t), v);
        }
        let rows = self.codomain.total();
        let columns = x.chunks(rows).map(<[Scalar]>::to_vec).collect();
        TensorMap::from_columns(self.field, self.domain.clone(), self.codomain.clone(), columns)
            .expect("consistent shapes")
    }

    /// Candidate number `i` in base-`p` order, last coefficient fastest.
    fn nth(&self, mut i: u128) -> TensorMap {
        let k = self.null.len();
        let mut digits = alloc::vec![0u64; k];
        for d in digits.iter_mut().rev() {
            *d = (i % self.p as u128) as u64;
            i /= self.p as u128;
        }
        self.with_coefficients(digits.into_iter())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> TensorMap {
        let p = self.p as u64;
        // rejection sampling keeps the draw uniform
        let zone = u64::MAX - u64::MAX % p;
        let draws: Vec<u64> = (0..self.null.len())
            .map(|_| loop {
                let x = rng.next_u64();
                if x < zone {
                    break x % p;
                }
            })
            .collect();
        self.with_coefficients(draws.into_iter())
    }

    fn all(&self) -> impl Iterator<Item = TensorMap> + '_ {
        (0..self.count()).map(move |i| self.nth(i))
    }
}

/// A prepared search: after construction, work items `0..work_len()` can be
/// evaluated in any order and partition.
#[derive(Clone, Debug)]
pub struct SearchPlan {
    a: FinAlgebra,
    v: PointedSpace,
    c: FinAlgebra,
    mode: SearchMode,
    spaces: [MapSpace; 4],
    /// Surviving `(R1, R2, R3)` in exhaustive mode.
    triples: Vec<[TensorMap; 3]>,
    total: u128,
}

fn unit_constraints(
    f: Field,
    x_dim: usize,
    x_unit: &[Scalar],
    y_dim: usize,
    y_unit: &[Scalar],
) -> Vec<(Vec<Scalar>, Vec<Scalar>)> {
    // for R: Y ⊗ X → X ⊗ Y
    let mut out = Vec::new();
    for i in 0..x_dim {
        let e = basis_vec(f, x_dim, i);
        out.push((kron(f, y_unit, &e), kron(f, &e, y_unit)));
    }
    for j in 0..y_dim {
        let e = basis_vec(f, y_dim, j);
        out.push((kron(f, &e, x_unit), kron(f, x_unit, &e)));
    }
    out
}

impl SearchPlan {
    pub fn new(spec: &SearchSpec, a: &FinAlgebra, v: &PointedSpace, c: &FinAlgebra) -> Result<Self> {
        let f = spec.field;
        if f.modulus().is_none() {
            return Err(Error::Precondition("search requires a prime field"));
        }
        if a.field() != f || v.field() != f || c.field() != f {
            return Err(Error::FieldMismatch);
        }
        let (na, nv, nc) = (a.dim(), v.dim(), c.dim());
        let space = |frozen: &Option<TensorMap>,
                     dom: &[usize],
                     cod: &[usize],
                     cons: Vec<(Vec<Scalar>, Vec<Scalar>)>| match frozen {
            Some(m) => {
                if m.field() != f {
                    return Err(Error::FieldMismatch);
                }
                crate::crossed::expect_shape("frozen map", m, dom, cod)?;
                Ok(Some(MapSpace::fixed(m)))
            }
            None => Ok::<_, Error>(MapSpace::solve(f, dom, cod, &cons)),
        };
        let e_cons: Vec<_> = (0..nv)
            .flat_map(|i| {
                let e = basis_vec(f, nv, i);
                let target = kron(f, &kron(f, a.unit(), &e), c.unit());
                [(kron(f, v.unit(), &e), target.clone()), (kron(f, &e, v.unit()), target)]
            })
            .collect();
        let spaces = [
            space(&spec.frozen.r1, &[nv, na], &[na, nv], unit_constraints(f, na, a.unit(), nv, v.unit()))?,
            space(&spec.frozen.r2, &[nc, nv], &[nv, nc], unit_constraints(f, nv, v.unit(), nc, c.unit()))?,
            space(&spec.frozen.r3, &[nc, na], &[na, nc], unit_constraints(f, na, a.unit(), nc, c.unit()))?,
            space(&spec.frozen.e, &[nv, nv], &[na, nv, nc], e_cons)?,
        ];
        let mut plan = SearchPlan {
            a: a.clone(),
            v: v.clone(),
            c: c.clone(),
            mode: spec.mode,
            spaces: match spaces {
                [Some(s1), Some(s2), Some(s3), Some(s4)] => [s1, s2, s3, s4],
                // inconsistent unit conditions: nothing to enumerate
                _ => {
                    let empty = |dom: &[usize], cod: &[usize]| MapSpace {
                        field: f,
                        p: f.modulus().expect("prime"),
                        domain: TensorShape::new(dom.to_vec()).expect("dims"),
                        codomain: TensorShape::new(cod.to_vec()).expect("dims"),
                        particular: Vec::new(),
                        null: Vec::new(),
                    };
                    return Ok(SearchPlan {
                        a: a.clone(),
                        v: v.clone(),
                        c: c.clone(),
                        mode: spec.mode,
                        spaces: [
                            empty(&[nv, na], &[na, nv]),
                            empty(&[nc, nv], &[nv, nc]),
                            empty(&[nc, na], &[na, nc]),
                            empty(&[nv, nv], &[na, nv, nc]),
                        ],
                        triples: Vec::new(),
                        total: 0,
                    });
                }
            },
            triples: Vec::new(),
            total: 0,
        };
        plan.total = plan.spaces.iter().fold(1u128, |acc, s| acc.saturating_mul(s.count()));
        if spec.mode == SearchMode::Exhaustive {
            if plan.total > spec.cap {
                return Err(Error::SearchSpaceTooLarge { size: plan.total, cap: spec.cap });
            }
            plan.triples = plan.stage_triples();
        }
        Ok(plan)
    }

    fn stage_triples(&self) -> Vec<[TensorMap; 3]> {
        let (a, c) = (&self.a, &self.c);
        let (na, nv, nc) = (a.dim(), self.v.dim(), c.dim());
        let r3s: Vec<TensorMap> = self.spaces[2]
            .all()
            .filter(|r3| mult_in_left("", r3, a, nc).is_none() && mult_in_right("", r3, na, c).is_none())
            .collect();
        let r1s: Vec<TensorMap> = self.spaces[0].all().filter(|r1| mult_in_left("", r1, a, nv).is_none()).collect();
        let r2s: Vec<TensorMap> = self.spaces[1].all().filter(|r2| mult_in_right("", r2, nv, c).is_none()).collect();
        let e0 = self.spaces[3].nth(0);
        let mut out = Vec::new();
        for r1 in &r1s {
            for r2 in &r2s {
                for r3 in &r3s {
                    let d = self.data([r1.clone(), r2.clone(), r3.clone()], e0.clone());
                    if evaluate_condition(&d, "equiv3") == Some(None) {
                        out.push([r1.clone(), r2.clone(), r3.clone()]);
                    }
                }
            }
        }
        out
    }

    fn data(&self, [r1, r2, r3]: [TensorMap; 3], e: TensorMap) -> TwoSidedData {
        TwoSidedData::new(self.a.clone(), self.v.clone(), self.c.clone(), r1, r2, r3, e)
            .expect("shapes fixed by the plan")
    }

    /// Size of the candidate space before pruning.
    pub fn space_size(&self) -> u128 {
        self.total
    }

    /// Number of work items.
    pub fn work_len(&self) -> usize {
        if self.total == 0 {
            return 0;
        }
        match self.mode {
            SearchMode::Exhaustive => self.triples.len() * self.spaces[3].count() as usize,
            SearchMode::Randomized { budget, .. } => budget as usize,
        }
    }

    /// Evaluates work items in `range`, returning the datasets that pass
    /// every condition, in item order.
    pub fn run_range(&self, range: Range<usize>) -> Vec<TwoSidedData> {
        let mut out = Vec::new();
        for i in range {
            let d = match self.mode {
                SearchMode::Exhaustive => {
                    let ne = self.spaces[3].count() as usize;
                    self.data(self.triples[i / ne].clone(), self.spaces[3].nth((i % ne) as u128))
                }
                SearchMode::Randomized { seed, .. } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let [s1, s2, s3, s4] = &self.spaces;
                    let maps = [s1.sample(&mut rng), s2.sample(&mut rng), s3.sample(&mut rng)];
                    self.data(maps, s4.sample(&mut rng))
                }
            };
            if passes_all(&d) {
                out.push(d);
            }
        }
        out
    }
}

fn passes_all(d: &TwoSidedData) -> bool {
    CONDITION_LABELS.iter().all(|l| evaluate_condition(d, l) == Some(None))
}

fn sort_key(d: &TwoSidedData) -> Vec<u32> {
    [&d.r1, &d.r2, &d.r3, &d.e]
        .into_iter()
        .flat_map(|m| m.entries_row_major().map(|x| x.residue_value().unwrap_or(0)))
        .collect()
}

/// Canonical order (by matrix entries, row-major, `R1, R2, R3, E`) without
/// duplicates. The result does not depend on the order of `results`.
pub fn finalize(mut results: Vec<TwoSidedData>) -> Vec<TwoSidedData> {
    results.sort_by_cached_key(sort_key);
    results.dedup_by(|x, y| sort_key(x) == sort_key(y));
    results
}

/// Runs a whole search on the current thread.
pub fn search_fp(spec: &SearchSpec, a: &FinAlgebra, v: &PointedSpace, c: &FinAlgebra) -> Result<Vec<TwoSidedData>> {
    let plan = SearchPlan::new(spec, a, v, c)?;
    Ok(finalize(plan.run_range(0..plan.work_len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dual, f2_search_input, flip_map, flip_trivial};
    use crate::twosided::check_twosided;

    const F2: Field = Field::Prime(2);

    #[test]
    fn one_dimensional_has_only_the_trivial_solution() {
        let k = FinAlgebra::ground(F2);
        let all = search_fp(&SearchSpec::exhaustive(F2), &k, &k.as_pointed(), &k).unwrap();
        assert_eq!(all, alloc::vec![flip_trivial(&k, &k, &k)]);
    }

    #[test]
    fn rejects_rationals_and_large_spaces() {
        let q = Field::Rationals;
        let d = dual(q);
        assert!(matches!(search_fp(&SearchSpec::exhaustive(q), &d, &d.as_pointed(), &d), Err(Error::Precondition(_))));
        let (a, v, c) = f2_search_input();
        let spec = SearchSpec { cap: 1000, ..SearchSpec::exhaustive(F2) };
        assert!(matches!(search_fp(&spec, &a, &v, &c), Err(Error::SearchSpaceTooLarge { size: 1_048_576, cap: 1000 })));
        let spec = SearchSpec {
            frozen: Frozen { r1: Some(flip_map(Field::Prime(3), 2, 2)), ..Frozen::default() },
            ..SearchSpec::exhaustive(F2)
        };
        assert!(matches!(search_fp(&spec, &a, &v, &c), Err(Error::FieldMismatch)));
    }

    #[test]
    fn fully_frozen_valid_data_is_found_once() {
        let d = dual(F2);
        let data = flip_trivial(&d, &d, &d);
        let spec = SearchSpec {
            frozen: Frozen {
                r1: Some(data.r1.clone()),
                r2: Some(data.r2.clone()),
                r3: Some(data.r3.clone()),
                e: Some(data.e.clone()),
            },
            ..SearchSpec::exhaustive(F2)
        };
        let plan = SearchPlan::new(&spec, &d, &d.as_pointed(), &d).unwrap();
        assert_eq!(plan.space_size(), 1);
        assert_eq!(search_fp(&spec, &d, &d.as_pointed(), &d).unwrap(), alloc::vec![data]);
    }

    #[test]
    fn randomized_is_deterministic_and_split_independent() {
        let (a, v, c) = f2_search_input();
        let frozen = Frozen { r2: Some(flip_map(F2, 2, 2)), r3: Some(flip_map(F2, 2, 2)), ..Frozen::default() };
        let spec =
            SearchSpec { mode: SearchMode::Randomized { budget: 600, seed: 11 }, frozen, ..SearchSpec::exhaustive(F2) };
        let once = search_fp(&spec, &a, &v, &c).unwrap();
        assert_eq!(once, search_fp(&spec, &a, &v, &c).unwrap());
        assert!(!once.is_empty());
        let plan = SearchPlan::new(&spec, &a, &v, &c).unwrap();
        let mut pieces = Vec::new();
        for start in (0..600).step_by(77).rev() {
            pieces.extend(plan.run_range(start..(start + 77).min(600)));
        }
        assert_eq!(finalize(pieces), once);
        for d in &once {
            assert!(check_twosided(d).all_pass());
        }
        let other = SearchSpec { mode: SearchMode::Randomized { budget: 600, seed: 12 }, ..spec.clone() };
        assert_ne!(search_fp(&other, &a, &v, &c).unwrap(), once);
    }

    #[test]
    fn finalize_ignores_order_and_duplicates() {
        let d = dual(F2);
        let x = flip_trivial(&d, &d, &d);
        let mut y = x.clone();
        y.e.set(0, 3, F2.one());
        let a = finalize(alloc::vec![y.clone(), x.clone(), y.clone()]);
        let b = finalize(alloc::vec![x.clone(), y.clone()]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }
}

use xprod_core::fixtures;
use xprod_core::twosided::{
    build_twosided_forced, check_composite, check_twosided, evaluate_condition, TwoSidedData, COMPOSITE_LABELS,
    CONDITION_LABELS,
};
use xprod_core::Error;

/// `(label, fixture, map, row, column, failing labels)`: adding 1 to that
/// entry fails exactly the listed labels. Unit conditions on `R1`, `R2`, `R3`
/// cannot be broken alone on these fixtures; the listed supersets are the
/// smallest found.
const TABLE: [(&str, &str, usize, usize, usize, &[&str]); 12] = [
    ("twR31", "flip-dual-Q", 2, 1, 2, &["twR31", "twR32", "equiv5"]),
    ("twR32", "flip-dual-Q", 2, 1, 3, &["twR32"]),
    ("twR33", "flip-dual-Q", 2, 2, 3, &["twR33"]),
    ("unit-R1", "flip-dual-Q", 0, 2, 1, &["unit-R1", "equiv4"]),
    ("unit-R2", "flip-dual-Q", 1, 1, 2, &["unit-R2", "equiv5"]),
    ("unit-E", "flip-dual-Q", 3, 2, 0, &["unit-E"]),
    ("equiv1", "flip-dual-Q", 0, 1, 3, &["equiv1"]),
    ("equiv2", "flip-dual-Q", 1, 2, 3, &["equiv2"]),
    ("equiv3", "flip-r1-Q", 1, 0, 3, &["equiv3"]),
    ("equiv4", "flip-dual-Q", 0, 2, 3, &["equiv4"]),
    ("equiv5", "flip-dual-Q", 1, 1, 3, &["equiv5"]),
    ("equiv6", "q-twists-Q", 3, 5, 3, &["equiv6"]),
];

fn mutate(d: &TwoSidedData, map: usize, row: usize, col: usize) -> TwoSidedData {
    let mut d = d.clone();
    let m = match map {
        0 => &mut d.r1,
        1 => &mut d.r2,
        2 => &mut d.r3,
        _ => &mut d.e,
    };
    let v = m.entry(row, col) + &m.field().one();
    m.set(row, col, v);
    d
}

#[test]
fn each_label_has_a_single_entry_mutation() {
    let corpus = fixtures::static_corpus();
    let covered: Vec<&str> = TABLE.iter().map(|t| t.0).collect();
    assert_eq!(covered, CONDITION_LABELS);
    for (label, name, map, row, col, expect) in TABLE {
        let base = &corpus.iter().find(|(n, _)| *n == name).unwrap().1;
        let d = mutate(base, map, row, col);
        let report = check_twosided(&d);
        assert_eq!(report.failing_labels(), expect, "{label}");
        for c in &report.conditions {
            if let Some(w) = &c.witness {
                assert_ne!(w.lhs, w.rhs);
                assert_eq!(evaluate_condition(&d, c.label), Some(Some(w.clone())));
            }
        }
        let comp = check_composite(&d).unwrap();
        for (cl, l) in COMPOSITE_LABELS {
            assert_eq!(comp.passed(cl), report.passed(l), "{label}: {cl}");
        }
    }
}

#[test]
fn forced_build_surfaces_the_failure() {
    let d = fixtures::perturbed_super_dual(xprod_core::Field::Rationals);
    assert!(matches!(build_twosided_forced(&d), Err(Error::NotAssociative(_))));
    // a broken unit condition shows up as a unit failure of the product
    let base = fixtures::static_corpus().remove(0).1;
    let d = mutate(&base, 3, 2, 0);
    assert!(matches!(build_twosided_forced(&d), Err(Error::NotUnital(_))));
}

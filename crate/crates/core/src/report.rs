//! Named pass/fail results with re-checkable witnesses.

use alloc::vec::Vec;

use crate::scalar::Scalar;

/// A basis tuple at which an identity fails, together with both evaluated
/// sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    /// Which identity of a multi-part condition failed.
    pub identity: &'static str,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: &'static str,
    pub witness: Option<Witness>,
}

impl Condition {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub conditions: Vec<Condition>,
}

impl Report {
    pub fn push(&mut self, label: &'static str, witness: Option<Witness>) {
        self.conditions.push(Condition { label, witness });
    }

    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(Condition::passed)
    }

    pub fn get(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    pub fn passed(&self, label: &str) -> bool {
        self.get(label).is_some_and(Condition::passed)
    }

    pub fn failing_labels(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|c| !c.passed()).map(|c| c.label).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.conditions.extend(other.conditions);
    }

    /// Keeps only the condition with the given label.
    pub fn only(mut self, label: &str) -> Report {
        self.conditions.retain(|c| c.label == label);
        self
    }
}

/// First basis tuple (in the order produced by `tuples`) where the two sides
/// differ.
pub(crate) fn first_failure<I>(
    identity: &'static str,
    tuples: I,
    mut sides: impl FnMut(&[usize]) -> (Vec<Scalar>, Vec<Scalar>),
) -> Option<Witness>
where
    I: IntoIterator<Item = Vec<usize>>,
{
    for ix in tuples {
        let (lhs, rhs) = sides(&ix);
        if lhs != rhs {
            return Some(Witness { indices: ix, identity, lhs, rhs });
        }
    }
    None
}

/// All multi-indices of a box in lexicographic order.
pub(crate) fn tuples(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    (0..total).map(move |mut flat| {
        let mut ix = alloc::vec![0; dims.len()];
        for (slot, &d) in ix.iter_mut().zip(dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        ix
    })
}

/// First failing witness among several identities checked in sequence.
pub(crate) fn first_of(parts: impl IntoIterator<Item = Option<Witness>>) -> Option<Witness> {
    parts.into_iter().flatten().next()
}

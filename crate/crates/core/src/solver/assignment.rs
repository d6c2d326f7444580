use std::fmt;

use crate::calculus::{Calculus, RelationId};

use super::Instance;

/// A relation for every ordered pair of elements, stored as a dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    n: usize,
    rels: Vec<RelationId>,
}

/// Index of the canonical pair `(i, j)`, `i < j`, in row-major pair order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Canonical pairs `(0,1), (0,2), ..., (n-2,n-1)` in order.
pub fn canonical_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

impl Assignment {
    /// Expands one value per canonical pair: the diagonal becomes equality and
    /// reversed pairs get the converse.
    pub fn from_canonical(calc: &Calculus, n: usize, values: &[RelationId]) -> Self {
        assert_eq!(values.len(), n * n.saturating_sub(1) / 2, "one value per canonical pair");
        let mut rels = vec![calc.equality(); n * n];
        for ((i, j), &r) in canonical_pairs(n).zip(values) {
            rels[i * n + j] = r;
            rels[j * n + i] = calc.converse(r);
        }
        Assignment { n, rels }
    }

    /// A fully explicit matrix, row-major; nothing is derived or checked.
    pub fn from_matrix(n: usize, rels: Vec<RelationId>) -> Self {
        assert_eq!(rels.len(), n * n);
        Assignment { n, rels }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> RelationId {
        self.rels[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, r: RelationId) {
        self.rels[x * self.n + y] = r;
    }

    /// Values on canonical pairs, in pair order.
    pub fn canonical(&self) -> Vec<RelationId> {
        canonical_pairs(self.n).map(|(i, j)| self.get(i, j)).collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<u8> = self.canonical().iter().map(|r| r.0).collect();
        f.debug_struct("Assignment").field("n", &self.n).field("canonical", &vals).finish()
    }
}

/// A failed clause of the model definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignmentViolation {
    /// `v(x,x)` is not equality.
    Reflexive { x: usize },
    /// `v(x,z)` is not in `c(v(x,y), v(y,z))`.
    Composition { x: usize, y: usize, z: usize },
    /// The constraint at this index is not satisfied.
    Constraint { index: usize },
}

impl AssignmentViolation {
    pub fn describe(&self, inst: &Instance) -> String {
        let e = inst.elements();
        match *self {
            AssignmentViolation::Reflexive { x } => format!("({0},{0}) is not assigned equality", e[x]),
            AssignmentViolation::Composition { x, y, z } => {
                format!("triple ({},{},{}) breaks composition", e[x], e[y], e[z])
            }
            AssignmentViolation::Constraint { index } => {
                let c = &inst.constraints()[index];
                format!("constraint {index} on ({},{}) is violated", e[c.x], e[c.y])
            }
        }
    }
}

/// Checks an assignment against the model definition, independently of the
/// search code. An empty result means `a` is a model of `inst`.
pub fn verify_assignment(inst: &Instance, a: &Assignment) -> Vec<AssignmentViolation> {
    let calc = inst.calculus();
    let n = inst.len();
    assert_eq!(a.len(), n, "assignment size must match the instance");
    let mut out = Vec::new();
    for x in 0..n {
        if a.get(x, x) != calc.equality() {
            out.push(AssignmentViolation::Reflexive { x });
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = a.get(x, y);
            for z in 0..n {
                if !calc.compose(xy, a.get(y, z)).contains(a.get(x, z)) {
                    out.push(AssignmentViolation::Composition { x, y, z });
                }
            }
        }
    }
    for (index, c) in inst.constraints().iter().enumerate() {
        if !c.rels.contains(a.get(c.x, c.y)) {
            out.push(AssignmentViolation::Constraint { index });
        }
    }
    out
}

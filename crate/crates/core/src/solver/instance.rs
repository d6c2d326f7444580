use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::calculus::{Calculus, RelationSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("constraint relates {0:?} to itself")]
    SelfConstraint(String),
    #[error("constraint on ({0},{1}) has an empty relation set")]
    EmptyRelations(String, String),
    #[error("constraint on ({0},{1}) uses relations outside the calculus")]
    ForeignRelations(String, String),
}

/// `(x, y) in rels`, with `x` and `y` as element indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub x: usize,
    pub y: usize,
    pub rels: RelationSet,
}

/// Elements plus constraints over one calculus.
#[derive(Clone, Debug)]
pub struct Instance {
    calculus: Arc<Calculus>,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(calculus: impl Into<Arc<Calculus>>, elements: Vec<String>) -> Result<Self, InstanceError> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(InstanceError::DuplicateElement(e.clone()));
            }
        }
        Ok(Instance { calculus: calculus.into(), elements, index, constraints: Vec::new() })
    }

    /// Elements named `0..n`.
    pub fn numbered(calculus: impl Into<Arc<Calculus>>, n: usize) -> Self {
        Instance::new(calculus, (0..n).map(|i| i.to_string()).collect()).expect("numbered names are unique")
    }

    pub fn calculus(&self) -> &Calculus {
        &self.calculus
    }

    pub fn shared_calculus(&self) -> Arc<Calculus> {
        Arc::clone(&self.calculus)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, x: &str, y: &str, rels: RelationSet) -> Result<(), InstanceError> {
        let xi = self.element_index(x).ok_or_else(|| InstanceError::UnknownElement(x.to_string()))?;
        let yi = self.element_index(y).ok_or_else(|| InstanceError::UnknownElement(y.to_string()))?;
        self.add_constraint_at(xi, yi, rels)
    }

    pub fn add_constraint_at(&mut self, x: usize, y: usize, rels: RelationSet) -> Result<(), InstanceError> {
        let n = self.elements.len();
        if let Some(&bad) = [x, y].iter().find(|&&i| i >= n) {
            return Err(InstanceError::IndexOutOfRange(bad));
        }
        let (xn, yn) = (&self.elements[x], &self.elements[y]);
        if x == y {
            return Err(InstanceError::SelfConstraint(xn.clone()));
        }
        if rels.is_empty() {
            return Err(InstanceError::EmptyRelations(xn.clone(), yn.clone()));
        }
        if !rels.is_subset(self.calculus.universe()) {
            return Err(InstanceError::ForeignRelations(xn.clone(), yn.clone()));
        }
        self.constraints.push(Constraint { x, y, rels });
        Ok(())
    }

    /// Builder form of [`Instance::add_constraint`].
    pub fn with_constraint(mut self, x: &str, y: &str, rels: RelationSet) -> Result<Self, InstanceError> {
        self.add_constraint(x, y, rels)?;
        Ok(self)
    }
}

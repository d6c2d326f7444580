use thiserror::Error;

use crate::calculus::{builtin_tc10, builtin_tc6, tc10, tc6, Calculus, RelationId, RelationSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("choice order must list every relation exactly once")]
    ChoiceOrder,
    #[error("relation {0:?} shares a predicate with its converse and must be written with swapped arguments")]
    MustSwap(String),
    #[error("relations {0:?} and {1:?} would be written as the same atom")]
    Ambiguous(String, String),
}

/// Presentation choices that do not affect the meaning of an encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspLayout {
    /// Order of atoms in choice rules and disjointness constraints.
    pub choice_order: Vec<RelationId>,
    /// Relations whose atoms are written `p(Z,X)` instead of `p(X,Z)` in the
    /// single-predicate encoding.
    pub swapped: RelationSet,
    /// Variable names of the single-predicate choice rule.
    pub choice_vars: (String, String),
}

impl AspLayout {
    /// Preset for the built-in calculi, defaults for anything else.
    pub fn for_calculus(calc: &Calculus) -> AspLayout {
        if *calc == builtin_tc6() {
            AspLayout {
                choice_order: vec![tc6::S, tc6::F, tc6::ALT, tc6::I, tc6::EQ, tc6::DIS],
                swapped: [tc6::EQ, tc6::ALT, tc6::DIS].into_iter().collect(),
                choice_vars: ("X".into(), "Y".into()),
            }
        } else if *calc == builtin_tc10() {
            use tc10::*;
            AspLayout {
                choice_order: vec![S, F, EX, EXI, ALT, RET, REV, I, EQ, DIS],
                swapped: RelationSet::singleton(EXI),
                choice_vars: ("X".into(), "Z".into()),
            }
        } else {
            AspLayout::default_for(calc)
        }
    }

    /// Declaration order; the later member of each converse pair is swapped.
    pub fn default_for(calc: &Calculus) -> AspLayout {
        let swapped = calc.relations().filter(|&r| calc.converse(r) < r).collect();
        AspLayout { choice_order: calc.relations().collect(), swapped, choice_vars: ("X".into(), "Y".into()) }
    }

    pub fn check(&self, calc: &Calculus) -> Result<(), LayoutError> {
        let mut seen = RelationSet::EMPTY;
        for &r in &self.choice_order {
            if r.index() >= calc.len() || seen.contains(r) {
                return Err(LayoutError::ChoiceOrder);
            }
            seen.insert(r);
        }
        if seen != calc.universe() {
            return Err(LayoutError::ChoiceOrder);
        }
        for r in calc.relations() {
            let c = calc.converse(r);
            if c < r && !self.swapped.contains(r) {
                return Err(LayoutError::MustSwap(calc.symbol(r).to_string()));
            }
            if c > r && self.swapped.contains(r) {
                return Err(LayoutError::Ambiguous(calc.symbol(r).to_string(), calc.symbol(c).to_string()));
            }
        }
        Ok(())
    }
}

/// Predicate of `r` in the single-predicate encoding: the earlier-declared
/// member of its converse pair.
pub(crate) fn representative(calc: &Calculus, r: RelationId) -> RelationId {
    r.min(calc.converse(r))
}

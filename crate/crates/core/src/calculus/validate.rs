use std::fmt;

use serde::Serialize;

use super::{Calculus, RelationId, RelationSet};

/// The algebraic laws checked by [`validate_calculus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    NonEmptyCells,
    Identity,
    ConverseInvolution,
    ConverseUniqueness,
    ConverseComposition,
}

impl Law {
    pub const ALL: [Law; 5] =
        [Law::NonEmptyCells, Law::Identity, Law::ConverseInvolution, Law::ConverseUniqueness, Law::ConverseComposition];

    pub fn name(self) -> &'static str {
        match self {
            Law::NonEmptyCells => "non-empty cells",
            Law::Identity => "identity",
            Law::ConverseInvolution => "converse involution",
            Law::ConverseUniqueness => "converse uniqueness",
            Law::ConverseComposition => "converse-composition",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One violated law instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyCell { r1: RelationId, r2: RelationId },
    /// `c(eq, r)` (left) or `c(r, eq)` (right) is not `{r}`.
    Identity { r: RelationId, left: bool, cell: RelationSet },
    /// `converse(converse(r)) != r`.
    NotInvolution { r: RelationId },
    EqualityNotSelfConverse { converse: RelationId },
    /// `{r' : eq in c(r, r')}` is not `{converse(r)}`.
    Uniqueness { r: RelationId, found: RelationSet },
    /// `converse_set(c(r1, r2)) != c(converse(r2), converse(r1))`.
    ConverseComposition { r1: RelationId, r2: RelationId, lhs: RelationSet, rhs: RelationSet },
}

impl Violation {
    pub fn law(&self) -> Law {
        match self {
            Violation::EmptyCell { .. } => Law::NonEmptyCells,
            Violation::Identity { .. } => Law::Identity,
            Violation::NotInvolution { .. } | Violation::EqualityNotSelfConverse { .. } => Law::ConverseInvolution,
            Violation::Uniqueness { .. } => Law::ConverseUniqueness,
            Violation::ConverseComposition { .. } => Law::ConverseComposition,
        }
    }

    /// Renders the violation with the calculus's own symbols.
    pub fn describe(&self, c: &Calculus) -> String {
        let s = |r: &RelationId| c.symbol(*r);
        match self {
            Violation::EmptyCell { r1, r2 } => format!("cell ({},{}) is empty", s(r1), s(r2)),
            Violation::Identity { r, left: true, cell } => {
                format!("cell ({},{}) = {} but should be {{{}}}", c.symbol(c.equality()), s(r), c.format_set(*cell), s(r))
            }
            Violation::Identity { r, left: false, cell } => {
                format!("cell ({},{}) = {} but should be {{{}}}", s(r), c.symbol(c.equality()), c.format_set(*cell), s(r))
            }
            Violation::NotInvolution { r } => {
                format!("converse(converse({})) = {}", s(r), c.symbol(c.converse(c.converse(*r))))
            }
            Violation::EqualityNotSelfConverse { converse } => {
                format!("converse({}) = {}", c.symbol(c.equality()), s(converse))
            }
            Violation::Uniqueness { r, found } => format!(
                "relations r' with {} in cell ({},r') are {}, expected {{{}}}",
                c.symbol(c.equality()),
                s(r),
                c.format_set(*found),
                c.symbol(c.converse(*r))
            ),
            Violation::ConverseComposition { r1, r2, lhs, rhs } => format!(
                "converse of cell ({},{}) is {} but cell ({},{}) is {}",
                s(r1),
                s(r2),
                c.format_set(*lhs),
                c.symbol(c.converse(*r2)),
                c.symbol(c.converse(*r1)),
                c.format_set(*rhs)
            ),
        }
    }
}

/// Outcome of [`validate_calculus`]; an empty report means every law holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn by_law(&self, law: Law) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.law() == law)
    }

    /// One line per violation, grouped by law.
    pub fn render(&self, c: &Calculus) -> Vec<String> {
        Law::ALL
            .iter()
            .flat_map(|&law| self.by_law(law).map(move |v| format!("{law}: {}", v.describe(c))))
            .collect()
    }
}

/// Checks the calculus laws and lists every violating instance.
///
/// Laws: non-empty cells, `eq` as two-sided identity, converse as an involution
/// fixing `eq`, uniqueness of the converse witnessed by `eq in c(r, r')`, and
/// `converse(c(r1, r2)) = c(converse(r2), converse(r1))`.
pub fn validate_calculus(c: &Calculus) -> ValidationReport {
    let mut violations = Vec::new();
    let eq = c.equality();

    for r1 in c.relations() {
        for r2 in c.relations() {
            if c.compose(r1, r2).is_empty() {
                violations.push(Violation::EmptyCell { r1, r2 });
            }
        }
    }

    for r in c.relations() {
        let cell = c.compose(eq, r);
        if cell != RelationSet::singleton(r) {
            violations.push(Violation::Identity { r, left: true, cell });
        }
        let cell = c.compose(r, eq);
        if cell != RelationSet::singleton(r) {
            violations.push(Violation::Identity { r, left: false, cell });
        }
    }

    if c.converse(eq) != eq {
        violations.push(Violation::EqualityNotSelfConverse { converse: c.converse(eq) });
    }
    for r in c.relations() {
        if c.converse(c.converse(r)) != r {
            violations.push(Violation::NotInvolution { r });
        }
    }

    for r in c.relations() {
        let found: RelationSet = c.relations().filter(|&r2| c.compose(r, r2).contains(eq)).collect();
        if found != RelationSet::singleton(c.converse(r)) {
            violations.push(Violation::Uniqueness { r, found });
        }
    }

    for r1 in c.relations() {
        for r2 in c.relations() {
            let lhs = c.converse_set(c.compose(r1, r2));
            let rhs = c.compose(c.converse(r2), c.converse(r1));
            if lhs != rhs {
                violations.push(Violation::ConverseComposition { r1, r2, lhs, rhs });
            }
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{builtin_tc10, builtin_tc6, tc10, tc6};

    #[test]
    fn builtins_are_valid() {
        assert_eq!(validate_calculus(&builtin_tc6()), ValidationReport::default());
        assert_eq!(validate_calculus(&builtin_tc10()), ValidationReport::default());
    }

    #[test]
    fn emptied_cell_is_reported() {
        let c = builtin_tc6().with_cell(tc6::ALT, tc6::ALT, RelationSet::EMPTY);
        let report = validate_calculus(&c);
        let empty: Vec<_> = report.by_law(Law::NonEmptyCells).collect();
        assert_eq!(empty, vec![&Violation::EmptyCell { r1: tc6::ALT, r2: tc6::ALT }]);
        // eq is also lost from (alt,alt), so uniqueness fails for alt.
        assert!(report.by_law(Law::ConverseUniqueness).count() >= 1);
    }

    #[test]
    fn asymmetric_edit_breaks_converse_composition() {
        let c = builtin_tc6();
        let cell = c.set_of(&["i", "dis", "f"]).unwrap();
        let c = c.with_cell(tc6::S, tc6::F, cell);
        let report = validate_calculus(&c);
        let rendered = report.render(&c);
        assert!(rendered.iter().any(|l| l.starts_with("converse-composition: converse of cell (s,f)")), "{rendered:?}");
    }

    #[test]
    fn broken_converse_map() {
        let c = builtin_tc10();
        let mut conv: Vec<_> = c.relations().map(|r| c.converse(r)).collect();
        conv[tc10::EXI.index()] = tc10::EXI;
        let c = c.with_converse(conv).unwrap();
        let report = validate_calculus(&c);
        assert!(report.violations.contains(&Violation::NotInvolution { r: tc10::EX }));
    }
}

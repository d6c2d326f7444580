//! Qualitative calculi as data.
//!
//! A [`Calculus`] is a finite alphabet of base relations together with a
//! designated equality relation, a converse map and a dense composition table.
//! Everything downstream (closure, search, encodings) works against this type,
//! so the built-in trajectory calculi and user-supplied tables are handled by
//! the same code.

mod builtin;
mod format;
mod relset;
mod validate;

use std::fmt;

use thiserror::Error;

pub use builtin::{builtin_tc10, builtin_tc6, tc10, tc6};
pub use format::{calculus_from_value, load_calculus, save_calculus, CalculusFileError};
pub use relset::{Iter, RelationId, RelationSet, MAX_RELATIONS};
pub use validate::{validate_calculus, Law, ValidationReport, Violation};

/// Alphabets up to this size get a precomputed `relation x set` composition cache.
const LIFT_CACHE_MAX: usize = 12;
/// Alphabets up to this size get a precomputed converse image for every set.
const CONVERSE_CACHE_MAX: usize = 16;

/// Structural problems that make a calculus unrepresentable.
///
/// Violations of the algebraic laws are not errors; see [`validate_calculus`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("a calculus needs at least one relation")]
    NoRelations,
    #[error("{0} relations exceed the supported maximum of {MAX_RELATIONS}")]
    TooManyRelations(usize),
    #[error("invalid relation symbol {0:?}: expected a lowercase identifier")]
    BadSymbol(String),
    #[error("duplicate relation symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("relation id {0} is out of range")]
    IdOutOfRange(usize),
    #[error("converse map has {found} entries, expected {expected}")]
    ConverseSize { expected: usize, found: usize },
    #[error("composition table has {found} cells, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("table cell ({0},{1}) mentions a relation outside the alphabet")]
    CellOutOfRange(usize, usize),
}

/// An immutable qualitative calculus `(R, eq, converse, c)`.
#[derive(Clone)]
pub struct Calculus {
    name: String,
    symbols: Vec<String>,
    equality: RelationId,
    converse: Vec<RelationId>,
    table: Vec<RelationSet>,
    // lift[(r1 << n) | s2] = compose_set({r1}, s2)
    lift: Vec<RelationSet>,
    converse_of_set: Vec<RelationSet>,
}

pub(crate) fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

impl Calculus {
    /// Builds a calculus from raw parts.
    ///
    /// `table` is row-major: the cell for `(r1, r2)` lives at `r1 * n + r2`.
    /// Cells may be empty here; emptiness is reported by validation.
    pub fn new(
        name: impl Into<String>,
        symbols: Vec<String>,
        equality: RelationId,
        converse: Vec<RelationId>,
        table: Vec<RelationSet>,
    ) -> Result<Self, CalculusError> {
        let n = symbols.len();
        if n == 0 {
            return Err(CalculusError::NoRelations);
        }
        if n > MAX_RELATIONS {
            return Err(CalculusError::TooManyRelations(n));
        }
        for (i, s) in symbols.iter().enumerate() {
            if !is_symbol(s) {
                return Err(CalculusError::BadSymbol(s.clone()));
            }
            if symbols[..i].contains(s) {
                return Err(CalculusError::DuplicateSymbol(s.clone()));
            }
        }
        if equality.index() >= n {
            return Err(CalculusError::IdOutOfRange(equality.index()));
        }
        if converse.len() != n {
            return Err(CalculusError::ConverseSize { expected: n, found: converse.len() });
        }
        if let Some(bad) = converse.iter().find(|r| r.index() >= n) {
            return Err(CalculusError::IdOutOfRange(bad.index()));
        }
        if table.len() != n * n {
            return Err(CalculusError::TableSize { expected: n * n, found: table.len() });
        }
        let all = RelationSet::full(n);
        if let Some(pos) = table.iter().position(|c| !c.is_subset(all)) {
            return Err(CalculusError::CellOutOfRange(pos / n, pos % n));
        }
        let mut calc = Calculus {
            name: name.into(),
            symbols,
            equality,
            converse,
            table,
            lift: Vec::new(),
            converse_of_set: Vec::new(),
        };
        calc.build_caches();
        Ok(calc)
    }

    fn build_caches(&mut self) {
        let n = self.len();
        self.lift.clear();
        self.converse_of_set.clear();
        if n <= LIFT_CACHE_MAX {
            let width = 1usize << n;
            self.lift = vec![RelationSet::EMPTY; n * width];
            for r1 in 0..n {
                let row = &mut self.lift[r1 * width..(r1 + 1) * width];
                for s2 in 1..width {
                    // Build each entry from the entry with its lowest bit removed.
                    let low = s2.trailing_zeros() as usize;
                    row[s2] = row[s2 & (s2 - 1)] | self.table[r1 * n + low];
                }
            }
        }
        if n <= CONVERSE_CACHE_MAX {
            let width = 1usize << n;
            let mut conv = vec![RelationSet::EMPTY; width];
            for s in 1..width {
                let low = s.trailing_zeros() as usize;
                conv[s] = conv[s & (s - 1)] | RelationSet::singleton(self.converse[low]);
            }
            self.converse_of_set = conv;
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of base relations.
    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, r: RelationId) -> &str {
        &self.symbols[r.index()]
    }

    pub fn relation(&self, symbol: &str) -> Option<RelationId> {
        self.symbols.iter().position(|s| s == symbol).map(|i| RelationId(i as u8))
    }

    /// All relations in declaration order.
    pub fn relations(&self) -> impl Iterator<Item = RelationId> + '_ {
        (0..self.len()).map(|i| RelationId(i as u8))
    }

    /// The set of all base relations.
    #[inline]
    pub fn universe(&self) -> RelationSet {
        RelationSet::full(self.len())
    }

    #[inline]
    pub fn equality(&self) -> RelationId {
        self.equality
    }

    #[inline]
    pub fn converse(&self, r: RelationId) -> RelationId {
        self.converse[r.index()]
    }

    /// Elementwise converse image of a set.
    #[inline]
    pub fn converse_set(&self, s: RelationSet) -> RelationSet {
        if !self.converse_of_set.is_empty() {
            return self.converse_of_set[s.bits() as usize];
        }
        s.iter().map(|r| self.converse(r)).collect()
    }

    /// The table cell `c(r1, r2)`.
    #[inline]
    pub fn compose(&self, r1: RelationId, r2: RelationId) -> RelationSet {
        self.table[r1.index() * self.len() + r2.index()]
    }

    /// Union of `c(r1, r2)` over `r1 in s1`, `r2 in s2`.
    #[inline]
    pub fn compose_set(&self, s1: RelationSet, s2: RelationSet) -> RelationSet {
        let mut out = RelationSet::EMPTY;
        if !self.lift.is_empty() {
            let n = self.len();
            let col = s2.bits() as usize;
            for r1 in s1 {
                out |= self.lift[(r1.index() << n) | col];
            }
        } else {
            for r1 in s1 {
                for r2 in s2 {
                    out |= self.compose(r1, r2);
                }
            }
        }
        out
    }

    /// A copy with one table cell replaced, for fault injection and table editing.
    pub fn with_cell(&self, r1: RelationId, r2: RelationId, cell: RelationSet) -> Calculus {
        let mut table = self.table.clone();
        table[r1.index() * self.len() + r2.index()] = cell;
        Calculus::new(self.name.clone(), self.symbols.clone(), self.equality, self.converse.clone(), table)
            .expect("replacing a cell keeps the calculus well-formed")
    }

    /// A copy with a different converse map.
    pub fn with_converse(&self, converse: Vec<RelationId>) -> Result<Calculus, CalculusError> {
        Calculus::new(self.name.clone(), self.symbols.clone(), self.equality, converse, self.table.clone())
    }

    pub fn with_name(&self, name: impl Into<String>) -> Calculus {
        let mut c = self.clone();
        c.name = name.into();
        c
    }

    /// Human-readable set rendering, e.g. `{eq, alt}`.
    pub fn format_set(&self, s: RelationSet) -> String {
        let parts: Vec<&str> = s.iter().map(|r| self.symbol(r)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses a set from symbols.
    pub fn set_of<S: AsRef<str>>(&self, symbols: &[S]) -> Option<RelationSet> {
        symbols.iter().map(|s| self.relation(s.as_ref())).collect()
    }
}

impl PartialEq for Calculus {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.symbols == other.symbols
            && self.equality == other.equality
            && self.converse == other.converse
            && self.table == other.table
    }
}

impl Eq for Calculus {}

impl fmt::Debug for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Calculus")
            .field("name", &self.name)
            .field("relations", &self.symbols)
            .field("equality", &self.symbol(self.equality))
            .finish_non_exhaustive()
    }
}

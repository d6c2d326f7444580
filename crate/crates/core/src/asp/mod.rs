//! ASP program text for an external answer-set solver.
//!
//! Four encodings of model existence are generated from a calculus:
//!
//! * `coi7`: one predicate per converse pair, a choice over ordered pairs
//!   `X != Z`, disjunctive rules for table cells with at most
//!   [`DISJUNCTION_THRESHOLD`] relations and integrity constraints for larger
//!   ones, plus pairwise disjointness constraints.
//! * `ctsa`: one predicate per relation, a choice over `X < Y` only, one
//!   negative integrity constraint per table cell and rules bridging each
//!   non-symmetric converse pair.
//! * `ctsa2`: `ctsa` where the choice is skipped for pairs with a known fact.
//! * `gen`: a fixed core that reads the calculus from `relation/1` and
//!   `table/3` facts.
//!
//! Rules are emitted in row-major table order.

mod emit;
mod layout;
mod terms;

use std::fmt;

use thiserror::Error;

pub use emit::{emit_instance_facts, emit_program, emit_program_with, DISJUNCTION_THRESHOLD};
pub use layout::{AspLayout, LayoutError};
pub use terms::{compare_terms, render_term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Coi7,
    Ctsa,
    Ctsa2,
    Gen,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 4] = [EncodingKind::Coi7, EncodingKind::Ctsa, EncodingKind::Ctsa2, EncodingKind::Gen];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Coi7 => "coi7",
            EncodingKind::Ctsa => "ctsa",
            EncodingKind::Ctsa2 => "ctsa2",
            EncodingKind::Gen => "gen",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EncodingKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        EncodingKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown encoding {s:?}, expected coi7, ctsa, ctsa2 or gen"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspError {
    #[error("{encoding} requires singleton constraints")]
    NonSingleton { encoding: &'static str },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// A program as one rule or fact per line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramText {
    pub lines: Vec<String>,
}

impl ProgramText {
    pub fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn extend(&mut self, other: ProgramText) {
        self.lines.extend(other.lines);
    }
}

impl fmt::Display for ProgramText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

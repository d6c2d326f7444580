//! JSON calculus files.
//!
//! ```text
//! {
//!   "name": "tc6",
//!   "relations": ["eq", "alt", ...],
//!   "equality": "eq",
//!   "converse": {"eq": "eq", ...},
//!   "table": [["eq", "eq", ["eq"]], ...]
//! }
//! ```
//!
//! The table must list every ordered pair exactly once. Saving writes relations
//! in declaration order and the table row-major, so `save(load(save(c)))` is
//! byte-identical to `save(c)`.

use serde_json::{Map, Value};
use thiserror::Error;

use super::{Calculus, CalculusError, RelationId, RelationSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusFileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field {field:?}: {message}")]
    Shape { field: String, message: String },
    #[error("unknown relation symbol {symbol:?} in {context}")]
    UnknownSymbol { symbol: String, context: String },
    #[error("missing table cell ({0},{1})")]
    MissingCell(String, String),
    #[error("duplicate table cell ({0},{1})")]
    DuplicateCell(String, String),
    #[error("missing converse for relation {0:?}")]
    MissingConverse(String),
    #[error("converse is not an involution: converse({r}) = {c} but converse({c}) = {cc}")]
    NotInvolution { r: String, c: String, cc: String },
    #[error(transparent)]
    Structure(#[from] CalculusError),
}

fn shape(field: &str, message: impl Into<String>) -> CalculusFileError {
    CalculusFileError::Shape { field: field.to_string(), message: message.into() }
}

/// Parses a calculus file.
pub fn load_calculus(text: &str) -> Result<Calculus, CalculusFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CalculusFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    calculus_from_value(&value)
}

fn str_field<'a>(obj: &'a Map<String, Value>, field: &str) -> Result<&'a str, CalculusFileError> {
    obj.get(field).and_then(Value::as_str).ok_or_else(|| shape(field, "expected a string"))
}

/// Builds a calculus from an already-parsed JSON object (used for inline
/// calculi inside instance files).
pub fn calculus_from_value(value: &Value) -> Result<Calculus, CalculusFileError> {
    let obj = value.as_object().ok_or_else(|| shape("<root>", "expected an object"))?;
    let name = str_field(obj, "name")?.to_string();

    let symbols: Vec<String> = obj
        .get("relations")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("relations", "expected an array of strings"))?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| shape("relations", "expected an array of strings")))
        .collect::<Result<_, _>>()?;
    // Structural checks on the alphabet first so symbol lookups below are meaningful.
    for (i, s) in symbols.iter().enumerate() {
        if !super::is_symbol(s) {
            return Err(CalculusError::BadSymbol(s.clone()).into());
        }
        if symbols[..i].contains(s) {
            return Err(CalculusError::DuplicateSymbol(s.clone()).into());
        }
    }
    let n = symbols.len();
    let lookup = |s: &str, context: &str| -> Result<RelationId, CalculusFileError> {
        symbols
            .iter()
            .position(|x| x == s)
            .map(|i| RelationId(i as u8))
            .ok_or_else(|| CalculusFileError::UnknownSymbol { symbol: s.to_string(), context: context.to_string() })
    };

    let equality = lookup(str_field(obj, "equality")?, "equality")?;

    let conv_obj = obj.get("converse").and_then(Value::as_object).ok_or_else(|| shape("converse", "expected an object"))?;
    let mut converse: Vec<Option<RelationId>> = vec![None; n];
    for (k, v) in conv_obj {
        let r = lookup(k, "converse")?;
        let c = lookup(v.as_str().ok_or_else(|| shape("converse", format!("value for {k:?} must be a string")))?, "converse")?;
        converse[r.index()] = Some(c);
    }
    let converse: Vec<RelationId> = converse
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| CalculusFileError::MissingConverse(symbols[i].clone())))
        .collect::<Result<_, _>>()?;
    for (i, &c) in converse.iter().enumerate() {
        let cc = converse[c.index()];
        if cc.index() != i {
            return Err(CalculusFileError::NotInvolution {
                r: symbols[i].clone(),
                c: symbols[c.index()].clone(),
                cc: symbols[cc.index()].clone(),
            });
        }
    }

    let rows = obj.get("table").and_then(Value::as_array).ok_or_else(|| shape("table", "expected an array of triples"))?;
    let mut table: Vec<Option<RelationSet>> = vec![None; n * n];
    for (pos, row) in rows.iter().enumerate() {
        let bad = || shape("table", format!("entry {pos} must be [r1, r2, [out, ...]]"));
        let triple = row.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
        let r1 = lookup(triple[0].as_str().ok_or_else(bad)?, "table")?;
        let r2 = lookup(triple[1].as_str().ok_or_else(bad)?, "table")?;
        let mut cell = RelationSet::EMPTY;
        for out in triple[2].as_array().ok_or_else(bad)? {
            cell.insert(lookup(out.as_str().ok_or_else(bad)?, "table")?);
        }
        let slot = &mut table[r1.index() * n + r2.index()];
        if slot.is_some() {
            return Err(CalculusFileError::DuplicateCell(symbols[r1.index()].clone(), symbols[r2.index()].clone()));
        }
        *slot = Some(cell);
    }
    let table: Vec<RelationSet> = table
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| CalculusFileError::MissingCell(symbols[i / n].clone(), symbols[i % n].clone())))
        .collect::<Result<_, _>>()?;

    Ok(Calculus::new(name, symbols, equality, converse, table)?)
}

/// Writes the canonical file form.
pub fn save_calculus(c: &Calculus) -> String {
    let q = |s: &str| Value::String(s.to_string()).to_string();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"name\": {},\n", q(c.name())));
    let rels: Vec<String> = c.symbols().iter().map(|s| q(s)).collect();
    out.push_str(&format!("  \"relations\": [{}],\n", rels.join(", ")));
    out.push_str(&format!("  \"equality\": {},\n", q(c.symbol(c.equality()))));
    let conv: Vec<String> = c.relations().map(|r| format!("{}: {}", q(c.symbol(r)), q(c.symbol(c.converse(r))))).collect();
    out.push_str(&format!("  \"converse\": {{{}}},\n", conv.join(", ")));
    out.push_str("  \"table\": [\n");
    let mut cells = Vec::with_capacity(c.len() * c.len());
    for r1 in c.relations() {
        for r2 in c.relations() {
            let outs: Vec<String> = c.compose(r1, r2).iter().map(|r| q(c.symbol(r))).collect();
            cells.push(format!("    [{}, {}, [{}]]", q(c.symbol(r1)), q(c.symbol(r2)), outs.join(", ")));
        }
    }
    out.push_str(&cells.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

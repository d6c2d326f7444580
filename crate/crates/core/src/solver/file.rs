//! JSON instance files and model output.
//!
//! ```text
//! {"calculus": "tc6", "elements": ["a", "b"],
//!  "constraints": [{"x": "a", "y": "b", "rels": ["s", "f"]}]}
//! ```
//!
//! `calculus` is `"tc6"`, `"tc10"` or an inline calculus object in the
//! calculus file format.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::calculus::{builtin_tc10, builtin_tc6, calculus_from_value, save_calculus, Calculus, CalculusFileError};

use super::{canonical_pairs, Assignment, Instance, InstanceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceFileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field {field:?}: {message}")]
    Shape { field: String, message: String },
    #[error("unknown calculus {0:?}, expected \"tc6\", \"tc10\" or an inline calculus object")]
    UnknownCalculus(String),
    #[error("inline calculus: {0}")]
    Calculus(#[from] CalculusFileError),
    #[error("constraint {index}: unknown relation {symbol:?}")]
    UnknownRelation { index: usize, symbol: String },
    #[error("constraint {index}: {source}")]
    Constraint { index: usize, source: InstanceError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn shape(field: &str, message: impl Into<String>) -> InstanceFileError {
    InstanceFileError::Shape { field: field.to_string(), message: message.into() }
}

fn calculus_field(v: Option<&Value>) -> Result<Calculus, InstanceFileError> {
    match v {
        Some(Value::String(s)) => match s.as_str() {
            "tc6" => Ok(builtin_tc6()),
            "tc10" => Ok(builtin_tc10()),
            other => Err(InstanceFileError::UnknownCalculus(other.to_string())),
        },
        Some(obj @ Value::Object(_)) => Ok(calculus_from_value(obj)?),
        _ => Err(shape("calculus", "expected \"tc6\", \"tc10\" or an object")),
    }
}

fn name_field(v: &Value, field: &str) -> Result<String, InstanceFileError> {
    v.as_str().map(str::to_string).ok_or_else(|| shape(field, "expected a string"))
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InstanceFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| shape("<root>", "expected an object"))?;
    let calc = calculus_field(obj.get("calculus"))?;
    let elements = obj
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("elements", "expected an array of names"))?
        .iter()
        .map(|v| name_field(v, "elements"))
        .collect::<Result<Vec<_>, _>>()?;
    let mut inst = Instance::new(calc, elements)?;
    let constraints = match obj.get("constraints") {
        None => &Vec::new(),
        Some(v) => v.as_array().ok_or_else(|| shape("constraints", "expected an array"))?,
    };
    for (index, c) in constraints.iter().enumerate() {
        let field = format!("constraints[{index}]");
        let x = name_field(c.get("x").unwrap_or(&Value::Null), &format!("{field}.x"))?;
        let y = name_field(c.get("y").unwrap_or(&Value::Null), &format!("{field}.y"))?;
        let rels = c.get("rels").and_then(Value::as_array).ok_or_else(|| shape(&format!("{field}.rels"), "expected an array"))?;
        let mut set = crate::calculus::RelationSet::EMPTY;
        for r in rels {
            let sym = name_field(r, &format!("{field}.rels"))?;
            let id = inst
                .calculus()
                .relation(&sym)
                .ok_or_else(|| InstanceFileError::UnknownRelation { index, symbol: sym.clone() })?;
            set.insert(id);
        }
        inst.add_constraint(&x, &y, set).map_err(|source| InstanceFileError::Constraint { index, source })?;
    }
    Ok(inst)
}

fn calculus_value(calc: &Calculus) -> Value {
    for (name, builtin) in [("tc6", builtin_tc6()), ("tc10", builtin_tc10())] {
        if *calc == builtin {
            return Value::String(name.to_string());
        }
    }
    serde_json::from_str(&save_calculus(calc)).expect("saved calculus is valid JSON")
}

/// Serializes an instance; built-in calculi are written by name.
pub fn write_instance(inst: &Instance) -> String {
    let calc = inst.calculus();
    let e = inst.elements();
    let constraints: Vec<Value> = inst
        .constraints()
        .iter()
        .map(|c| {
            let rels: Vec<&str> = c.rels.iter().map(|r| calc.symbol(r)).collect();
            json!({"x": e[c.x], "y": e[c.y], "rels": rels})
        })
        .collect();
    let v = json!({"calculus": calculus_value(calc), "elements": e, "constraints": constraints});
    let mut s = serde_json::to_string_pretty(&v).expect("instance serializes");
    s.push('\n');
    s
}

/// One model as a `"x|y": "rel"` object over canonical pairs.
pub fn model_value(inst: &Instance, a: &Assignment) -> Value {
    let e = inst.elements();
    let calc = inst.calculus();
    let mut m = Map::new();
    for (i, j) in canonical_pairs(inst.len()) {
        m.insert(format!("{}|{}", e[i], e[j]), Value::String(calc.symbol(a.get(i, j)).to_string()));
    }
    Value::Object(m)
}

/// The model output document.
pub fn write_models(inst: &Instance, status: &str, models: &[Assignment]) -> String {
    let models: Vec<Value> = models.iter().map(|a| model_value(inst, a)).collect();
    let mut s = serde_json::to_string_pretty(&json!({"status": status, "models": models})).expect("models serialize");
    s.push('\n');
    s
}

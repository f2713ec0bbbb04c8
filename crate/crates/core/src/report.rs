//! Report documents and their canonical JSON and text serializations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::algebraifold::{Derivation, OneForm};
use crate::error::Error;
use crate::maps::PulledModuleElem;
use crate::scalar::ScalarValue;
use crate::tensor::Tensor;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The result of one check.
#[derive(Clone, Debug)]
pub enum CheckOutcome {
    /// A computed value; `pass` is set when the check asserts something.
    Done { value: Value, pass: Option<bool> },
    Failed(Error),
}

impl CheckOutcome {
    pub fn ok(value: Value) -> Self {
        CheckOutcome::Done { value, pass: None }
    }

    pub fn verdict(value: Value, pass: bool) -> Self {
        CheckOutcome::Done { value, pass: Some(pass) }
    }

    /// 0 when fine, 1 for input errors, 2 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CheckOutcome::Done { pass: Some(false), .. } => 2,
            CheckOutcome::Done { .. } => 0,
            CheckOutcome::Failed(e) if e.is_input_error() => 1,
            CheckOutcome::Failed(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CheckOutcome::Done { value, pass } => {
                let mut v = value.clone();
                if let (Some(p), Value::Object(map)) = (pass, &mut v) {
                    map.insert("pass".into(), Value::Bool(*p));
                }
                v
            }
            CheckOutcome::Failed(e) => json!({
                "error": { "code": e.code(), "message": e.to_string() }
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Value,
    pub results: BTreeMap<String, CheckOutcome>,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    /// Input errors win over mathematical failures.
    pub fn exit_code(&self) -> i32 {
        let codes: Vec<i32> = self.results.values().map(CheckOutcome::exit_code).collect();
        if codes.contains(&1) {
            1
        } else {
            codes.into_iter().max().unwrap_or(0)
        }
    }

    pub fn status(&self) -> &'static str {
        match self.exit_code() {
            0 => "ok",
            1 => "error",
            _ => "fail",
        }
    }

    pub fn to_json(&self) -> Value {
        let results: Map<String, Value> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        json!({
            "command": self.command,
            "engine": { "name": "afd", "version": ENGINE_VERSION },
            "inputs": self.inputs,
            "results": results,
            "status": self.status(),
            "warnings": self.warnings,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::ValidationError(format!("unknown format `{other}`"))),
        }
    }
}

/// Canonical serialization. JSON objects have sorted keys; both formats end
/// with a newline.
pub fn emit_report(r: &ReportDocument, format: Format) -> String {
    let v = r.to_json();
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("report values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            write_text(&mut s, &v, 0);
            s
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(leaf).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn component(v: &Value) -> Option<String> {
    let m = v.as_object()?;
    if m.len() != 2 {
        return None;
    }
    let idx = m.get("index")?.as_array()?;
    let value = m.get("value")?.as_str()?;
    let idx: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    Some(format!("[{}] = {value}", idx.join(", ")))
}

fn write_text(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                if is_leaf(val) {
                    let _ = writeln!(out, "{pad}{k}: {}", leaf(val));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    write_text(out, val, indent + 2);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some(c) = component(item) {
                    let _ = writeln!(out, "{pad}{c}");
                } else if is_leaf(item) {
                    let _ = writeln!(out, "{pad}- {}", leaf(item));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    write_text(out, item, indent + 2);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", leaf(other));
        }
    }
}

/// Sparse component listing with 1-based indices and rank metadata.
pub fn tensor_json(t: &Tensor) -> Value {
    let (r, s) = t.rank();
    let components: Vec<Value> = t
        .entries()
        .map(|(idx, v)| {
            json!({
                "index": idx.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "value": v.to_string(),
            })
        })
        .collect();
    json!({
        "rank": [r, s],
        "dimension": t.dim(),
        "components": components,
    })
}

pub fn scalars_json(values: &[ScalarValue]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(v.to_string())).collect())
}

pub fn derivation_json(v: &Derivation) -> Value {
    scalars_json(v.coeffs())
}

pub fn one_form_json(v: &OneForm) -> Value {
    scalars_json(v.coeffs())
}

pub fn pulled_json(v: &PulledModuleElem) -> Value {
    scalars_json(v.coeffs())
}

//! Signal-set JSON and a deterministic emitter that writes every float with
//! 17 significant digits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::signal::{SetMeta, Signal, SignalError, SignalSet};

#[derive(Debug, Error)]
pub enum ReadError {
    /// not JSON, or JSON of the wrong shape
    #[error("malformed signal-set JSON: {0}")]
    Malformed(String),
    /// well-formed, but the signals break a set invariant
    #[error("invalid signal set: {0}")]
    Invalid(#[from] SignalError),
}

/// Float with 17 significant digits: always round-trips.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // keep the sign bit stable across platforms
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

fn write_number(n: &Number, out: &mut String) {
    if n.is_f64() {
        out.push_str(&format_float(n.as_f64().expect("f64 number")));
    } else {
        out.push_str(&n.to_string());
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(is_scalar),
        other => is_scalar(other),
    })
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(n, out),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if is_flat(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                push_indent(indent + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

/// Pretty JSON with fixed float formatting and a trailing newline.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

/// [`to_json`] of any serializable value.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    Ok(to_json(&serde_json::to_value(value)?))
}

pub fn set_to_value(set: &SignalSet) -> Value {
    let signals: Vec<Value> = set
        .signals()
        .iter()
        .map(|s| {
            Value::Array(
                s.values()
                    .iter()
                    .map(|z| json!([z.re, z.im]))
                    .collect(),
            )
        })
        .collect();
    let mut map = Map::new();
    map.insert("n".into(), json!(set.n()));
    map.insert("M".into(), json!(set.len()));
    map.insert("signals".into(), Value::Array(signals));
    map.insert("meta".into(), serde_json::to_value(set.meta()).expect("meta serializes"));
    Value::Object(map)
}

pub fn write_set_json(set: &SignalSet) -> String {
    to_json(&set_to_value(set))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetFile {
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    signals: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    meta: Option<SetMeta>,
}

/// Parses and validates a signal set.
pub fn read_set_json(text: &str) -> Result<SignalSet, ReadError> {
    let file: SetFile = serde_json::from_str(text).map_err(|e| ReadError::Malformed(e.to_string()))?;
    if file.signals.len() != file.m {
        return Err(ReadError::Malformed(format!(
            "M = {} but {} signals given",
            file.m,
            file.signals.len()
        )));
    }
    if let Some(bad) = file.signals.iter().position(|s| s.len() != file.n) {
        return Err(ReadError::Malformed(format!(
            "signal {bad} has length {}, expected n = {}",
            file.signals[bad].len(),
            file.n
        )));
    }
    let signals = file
        .signals
        .into_iter()
        .map(|s| Signal::new(s.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignalSet::new(signals, file.meta.unwrap_or_else(SetMeta::external))?)
}

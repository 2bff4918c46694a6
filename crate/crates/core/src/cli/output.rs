//! Versioned output records, serialized as JSON or CSV.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

pub type Map = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Map,
    pub rows: Vec<Map>,
    pub summary: Map,
    pub schema_version: &'static str,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            rows: Vec::new(),
            summary: Map::new(),
            schema_version: SCHEMA_VERSION,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), v.into());
        self
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), v.into());
        self
    }
}

/// A float as JSON; non-finite values become the strings "+inf", "-inf", "nan".
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("+inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Builds a row from (key, value) pairs.
pub fn row<const N: usize>(pairs: [(&str, Value); N]) -> Map {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Compact JSON with every float written to 17 significant digits.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_float(value))
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json(record: &OutputRecord) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    record.serialize(&mut ser).expect("serializing an output record cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_i64().or_else(|| n.as_u64().map(|u| u as i64)) {
            Some(i) if !n.is_f64() => i.to_string(),
            _ => format_float(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        other => serde_json::to_string(other).unwrap_or_default(),
    }
}

/// Rows as CSV with a sorted header covering every key present.
pub fn to_csv(record: &OutputRecord) -> Result<String, csv::Error> {
    let mut header: Vec<&String> = Vec::new();
    for r in &record.rows {
        for k in r.keys() {
            if !header.contains(&k) {
                header.push(k);
            }
        }
    }
    header.sort();
    let mut w = csv::Writer::from_writer(Vec::new());
    if !header.is_empty() {
        w.write_record(header.iter().map(|s| s.as_str()))?;
    }
    for r in &record.rows {
        w.write_record(header.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}
